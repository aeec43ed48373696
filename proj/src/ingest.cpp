// Copyright 2026 The SOL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sol/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "sol/errors.hpp"

namespace sol {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool is_missing(const std::string& cell, const std::string& token) {
  const auto t = trim(cell);
  return t.empty() || (!token.empty() && t == token);
}

double numeric_cell(const std::string& cell, const std::string& column, std::size_t row) {
  double v = 0.0;
  if (!parse_number(cell, v)) {
    std::ostringstream msg;
    msg << "row " << row + 1 << ", column '" << column << "': not a number: '" << cell << "'";
    throw DataError(msg.str());
  }
  return v;
}

}  // namespace

TabularDataset TabularDataset::from_csv(const CsvTable& table, const std::string& missing_token) {
  TabularDataset d;
  d.columns = table.header;
  d.rows = table.rows;
  d.kinds.assign(d.columns.size(), ColumnKind::Numeric);
  for (std::size_t c = 0; c < d.columns.size(); ++c) {
    for (const auto& row : d.rows) {
      double v = 0.0;
      if (!is_missing(row[c], missing_token) && !parse_number(row[c], v)) {
        d.kinds[c] = ColumnKind::Categorical;
        break;
      }
    }
  }
  return d;
}

std::size_t TabularDataset::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DataError("unknown column '" + name + "'");
}

std::size_t EncodedDataset::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw DataError("cannot fit standardization on zero rows");
  Standardizer s;
  s.mean = rows.colwise().mean();
  s.scale.resize(rows.cols());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    const double var = (rows.col(c).array() - s.mean(c)).square().mean();
    const double sd = std::sqrt(var);
    s.scale(c) = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& data) const {
  if (data.cols() != mean.size()) throw std::invalid_argument("standardizer width mismatch");
  Eigen::MatrixXd out = data;
  out.rowwise() -= mean;
  out.array().rowwise() /= scale.array();
  return out;
}

std::vector<int> label_by_future_level(std::span<const double> series, double level) {
  if (series.size() < 2) throw DataError("future-level labeling needs at least two values");
  std::vector<int> labels(series.size() - 1);
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (!std::isfinite(series[t])) {
      throw DataError("missing or non-finite value at position " + std::to_string(t));
    }
  }
  for (std::size_t t = 0; t + 1 < series.size(); ++t) labels[t] = series[t + 1] > level ? 1 : 0;
  return labels;
}

EncodedDataset clean_and_encode(const TabularDataset& raw, const PreprocessPlan& plan) {
  // Validate column references before touching data.
  std::vector<std::string> referenced = plan.drop_columns;
  for (const auto& r : plan.indicators) referenced.push_back(r.column);
  referenced.insert(referenced.end(), plan.categorical.begin(), plan.categorical.end());
  if (plan.label) referenced.push_back(plan.label->column);
  for (const auto& name : referenced) raw.column(name);

  // 1. Rows with any missing cell are removed.
  std::vector<const std::vector<std::string>*> kept;
  for (const auto& row : raw.rows) {
    const bool complete = std::none_of(row.begin(), row.end(),
                                       [&](const auto& cell) { return is_missing(cell, plan.missing_token); });
    if (complete) kept.push_back(&row);
  }
  if (kept.empty()) throw DataError("no rows left after removing rows with missing values");

  // 2. Labels.
  EncodedDataset out;
  std::set<std::size_t> dropped;
  for (const auto& name : plan.drop_columns) dropped.insert(raw.column(name));
  if (plan.label) {
    const auto& rule = *plan.label;
    const std::size_t c = raw.column(rule.column);
    if (rule.mode == LabelRule::Mode::Match) {
      for (const auto* row : kept) {
        const auto cell = trim((*row)[c]);
        const bool positive = std::find(rule.positive_values.begin(), rule.positive_values.end(), cell) !=
                              rule.positive_values.end();
        out.labels.push_back(positive ? 1 : 0);
      }
      if (rule.drop_source) dropped.insert(c);
    } else {
      std::vector<double> series;
      for (std::size_t r = 0; r < kept.size(); ++r) series.push_back(numeric_cell((*kept[r])[c], rule.column, r));
      out.labels = label_by_future_level(series, rule.level);
      kept.pop_back();
      if (kept.empty()) throw DataError("no rows left after future-level labeling");
    }
  }

  // 3-5. Column-wise encoding.
  std::map<std::size_t, std::string> indicator_value;
  for (const auto& r : plan.indicators) indicator_value[raw.column(r.column)] = r.value;
  std::set<std::size_t> forced_categorical;
  for (const auto& name : plan.categorical) forced_categorical.insert(raw.column(name));

  std::vector<std::vector<double>> columns;
  for (std::size_t c = 0; c < raw.columns.size(); ++c) {
    if (dropped.count(c)) continue;
    const auto& name = raw.columns[c];
    if (auto it = indicator_value.find(c); it != indicator_value.end()) {
      std::vector<double> col;
      for (const auto* row : kept) col.push_back(trim((*row)[c]) == it->second ? 1.0 : 0.0);
      out.feature_names.push_back(name);
      columns.push_back(std::move(col));
    } else if (raw.kinds[c] == ColumnKind::Categorical || forced_categorical.count(c)) {
      std::set<std::string> levels;
      for (const auto* row : kept) levels.insert(trim((*row)[c]));
      for (const auto& level : levels) {
        std::vector<double> col;
        for (const auto* row : kept) col.push_back(trim((*row)[c]) == level ? 1.0 : 0.0);
        out.feature_names.push_back(name + "=" + level);
        columns.push_back(std::move(col));
      }
    } else {
      std::vector<double> col;
      for (std::size_t r = 0; r < kept.size(); ++r) col.push_back(numeric_cell((*kept[r])[c], name, r));
      out.feature_names.push_back(name);
      columns.push_back(std::move(col));
    }
  }
  if (columns.empty()) throw DataError("no feature columns left after preprocessing");

  out.features.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < kept.size(); ++r) {
      out.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
    }
  }

  // 6. Standardization from the fit portion only.
  if (plan.standardize) {
    const auto fit_rows = std::min<std::size_t>(plan.fit_rows.value_or(kept.size()), kept.size());
    if (fit_rows == 0) throw DataError("standardization fit portion is empty");
    const auto s = Standardizer::fit(out.features.topRows(static_cast<Eigen::Index>(fit_rows)));
    out.features = s.apply(out.features);
  }
  return out;
}

void WindowPlan::validate(std::size_t rows) const {
  if (train_length == 0 || test_length == 0) throw DataError("window lengths must be positive");
  if (repeats == 0) throw DataError("window repeats must be positive");
  if (train_length + test_length + shift * (repeats - 1) > rows) {
    std::ostringstream msg;
    msg << "window plan needs " << train_length + test_length + shift * (repeats - 1)
        << " rows but the dataset has " << rows;
    throw DataError(msg.str());
  }
}

std::vector<Window> make_windows(std::size_t rows, const WindowPlan& plan) {
  plan.validate(rows);
  std::vector<Window> windows;
  for (std::size_t k = 0; k < plan.repeats; ++k) {
    Window w;
    w.train_begin = k * plan.shift;
    w.train_end = w.train_begin + plan.train_length;
    w.test_begin = w.train_end;
    w.test_end = w.test_begin + plan.test_length;
    windows.push_back(w);
  }
  return windows;
}

CsvTable to_csv(const EncodedDataset& data) {
  CsvTable t;
  t.header = data.feature_names;
  const bool labelled = !data.labels.empty();
  if (labelled) t.header.push_back("label");
  for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
    std::vector<std::string> row;
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) row.push_back(format_number(data.features(r, c)));
    if (labelled) row.push_back(std::to_string(data.labels[static_cast<std::size_t>(r)]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace sol
