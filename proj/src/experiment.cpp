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

#include "sol/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sol/errors.hpp"
#include "sol/parallel.hpp"
#include "sol/synthetic.hpp"

namespace sol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RowSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

RowSplit subsample(std::size_t rows, double fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows))), 2, rows);
  RowSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out(end - begin);
  std::iota(out.begin(), out.end(), begin);
  return out;
}

std::size_t count_positive(std::span<const int> labels) {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

double score_at(ScoreKind kind, const LabeledBatch& batch, double tau) {
  return score_value(kind, classical_cm(batch, tau));
}

const ThresholdDistribution* distribution_of(const LossSpec& loss) {
  if (const auto* sol = std::get_if<SolLoss>(&loss)) return &sol->dist;
  return nullptr;
}

RunRecord run_one(const EncodedDataset& data, const ExperimentConfig& config, const RowSplit& split,
                  std::size_t repeat, std::size_t loss_index) {
  const LossSpec& loss = config.losses[loss_index];
  RunRecord record;
  record.repeat = repeat;
  record.loss_index = loss_index;
  record.loss = loss_label(loss);
  record.tau_star = record.train_score_tau_star = record.train_score_half = kNaN;
  record.test_score_tau_star = record.test_score_half = kNaN;

  const Eigen::MatrixXd raw_train = select_rows(data.features, split.train);
  const std::vector<int> y_train = select(data.labels, split.train);
  const Standardizer scaler = Standardizer::fit(raw_train);
  const Eigen::MatrixXd x_train = config.plan.standardize ? scaler.apply(raw_train) : raw_train;
  record.train_rows = split.train.size();
  record.train_positives = count_positive(y_train);
  record.test_rows = split.test.size();

  TrainConfig tc = config.train;
  tc.objective.loss = loss;
  tc.seed = derive_seed(config.seed, repeat, 2);
  const NetworkSpec spec = NetworkSpec::with_hidden(static_cast<std::size_t>(data.features.cols()), config.hidden);

  TrainReport report;
  try {
    report = fit(spec, tc, x_train, y_train);
  } catch (const NumericError& e) {
    record.failure = e.what();
    return record;
  }
  record.epochs = report.epochs_run;
  if (!report.success) {
    record.failure = "stuck";
    return record;
  }

  const Eigen::VectorXd p_train = forward(spec, report.final_weights, x_train);
  const LabeledBatch train_batch(std::vector<double>(p_train.data(), p_train.data() + p_train.size()), y_train);
  const ThresholdSweepResult best = sweep(train_batch, config.score);
  record.success = true;
  record.tau_star = best.tau_star;
  record.train_score_tau_star = best.best_score;
  record.train_score_half = score_at(config.score, train_batch, 0.5);
  if (const auto* dist = distribution_of(loss); dist && dist->kind() == DistributionKind::RaisedCosine) {
    record.out_of_support = !(best.tau_star > dist->lower() && best.tau_star < dist->upper());
  }

  if (!split.test.empty()) {
    const Eigen::MatrixXd raw_test = select_rows(data.features, split.test);
    const Eigen::MatrixXd x_test = config.plan.standardize ? scaler.apply(raw_test) : raw_test;
    const std::vector<int> y_test = select(data.labels, split.test);
    record.test_positives = count_positive(y_test);
    const Eigen::VectorXd p_test = forward(spec, report.final_weights, x_test);
    const LabeledBatch test_batch(std::vector<double>(p_test.data(), p_test.data() + p_test.size()), y_test);
    record.test_score_tau_star = score_at(config.score, test_batch, best.tau_star);
    record.test_score_half = score_at(config.score, test_batch, 0.5);
  }
  return record;
}

}  // namespace

CsvTable DataSource::load() const {
  switch (kind) {
    case DataKind::File:
      return read_csv_file(path);
    case DataKind::AdultLike:
      return make_adult_like(rows, seed);
    case DataKind::PollutionLike:
      return make_pollution_like(rows, seed, positive_rate);
  }
  throw ConfigError("unknown data source");
}

void ExperimentConfig::validate() const {
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (losses.empty()) throw ConfigError("loss grid must not be empty");
  if (histogram_bins < 1) throw ConfigError("histogram_bins must be positive");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (!plan.label) throw ConfigError("experiment needs a label rule");
  if (data.kind == DataKind::File && data.path.empty()) throw ConfigError("data path missing");
  if (data.kind != DataKind::File && data.rows < 10) throw ConfigError("generated data needs at least 10 rows");
  if (data.kind == DataKind::PollutionLike && !(data.positive_rate > 0.0 && data.positive_rate < 1.0)) {
    throw ConfigError("positive_rate must lie in (0, 1)");
  }
  for (auto w : hidden) {
    if (w == 0) throw ConfigError("hidden widths must be positive");
  }
  train.validate();
  for (const auto& loss : losses) {
    ObjectiveSpec objective = train.objective;
    objective.loss = loss;
    objective.validate();
  }
  if (resample.kind == ResampleKind::Subsample) {
    if (!(resample.train_fraction > 0.0 && resample.train_fraction <= 1.0)) {
      throw ConfigError("train_fraction must lie in (0, 1]");
    }
  } else if (resample.train_length < 2 || resample.shift < 1) {
    throw ConfigError("windows need train_length >= 2 and shift >= 1");
  }
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {kNaN, kNaN};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs, const std::vector<LossSpec>& losses) {
  std::vector<AggregateRow> rows;
  for (std::size_t l = 0; l < losses.size(); ++l) {
    AggregateRow row;
    row.loss = loss_label(losses[l]);
    std::vector<double> epochs, tau, s_star, s_half, t_star, t_half;
    for (const auto& r : runs) {
      if (r.loss_index != l) continue;
      ++row.runs;
      if (!r.success) continue;
      ++row.success;
      if (r.out_of_support) ++row.out_of_support;
      epochs.push_back(r.epochs);
      tau.push_back(r.tau_star);
      s_star.push_back(r.train_score_tau_star);
      s_half.push_back(r.train_score_half);
      if (!std::isnan(r.test_score_tau_star)) t_star.push_back(r.test_score_tau_star);
      if (!std::isnan(r.test_score_half)) t_half.push_back(r.test_score_half);
    }
    row.epochs = mean_std(epochs);
    row.tau_star = mean_std(tau);
    row.score_tau_star = mean_std(s_star);
    row.score_half = mean_std(s_half);
    row.test_score_tau_star = mean_std(t_star);
    row.test_score_half = mean_std(t_half);
    rows.push_back(row);
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  PreprocessPlan plan = config.plan;
  plan.standardize = false;  // statistics are fit per run on the training rows
  plan.fit_rows.reset();
  const EncodedDataset data = clean_and_encode(TabularDataset::from_csv(config.data.load(), plan.missing_token), plan);
  const auto n = static_cast<std::size_t>(data.features.rows());

  std::vector<RowSplit> splits(config.repeats);
  if (config.resample.kind == ResampleKind::Subsample) {
    for (std::size_t r = 0; r < config.repeats; ++r) {
      splits[r] = subsample(n, config.resample.train_fraction, derive_seed(config.seed, r, 1));
    }
  } else {
    WindowPlan wp{config.resample.train_length, config.resample.test_length, config.resample.shift, config.repeats};
    const auto windows = make_windows(n, wp);
    for (std::size_t r = 0; r < config.repeats; ++r) {
      splits[r].train = range(windows[r].train_begin, windows[r].train_end);
      splits[r].test = range(windows[r].test_begin, windows[r].test_end);
    }
  }

  const std::size_t losses = config.losses.size();
  std::vector<RunRecord> runs(config.repeats * losses);
  parallel_for(runs.size(), config.jobs, [&](std::size_t t) {
    const std::size_t repeat = t / losses;
    const std::size_t loss_index = t % losses;
    runs[t] = run_one(data, config, splits[repeat], repeat, loss_index);
  });

  ExperimentResult result;
  result.score = to_string(config.score);
  result.aggregate = aggregate(runs, config.losses);
  result.runs = std::move(runs);
  result.features = static_cast<std::size_t>(data.features.cols());
  result.rows = n;
  result.positives = data.positives();
  return result;
}

std::vector<ThresholdDistributionReport> threshold_distribution_report(const ExperimentResult& result,
                                                                       const std::vector<LossSpec>& losses,
                                                                       std::size_t bins) {
  std::vector<ThresholdDistributionReport> out;
  for (std::size_t l = 0; l < losses.size(); ++l) {
    std::vector<double> taus;
    for (const auto& r : result.runs) {
      if (r.loss_index == l && r.success) taus.push_back(r.tau_star);
    }
    if (taus.empty()) continue;
    ThresholdDistributionReport report;
    report.loss = loss_label(losses[l]);
    report.histogram = optimal_threshold_histogram(taus, bins);
    if (const auto* dist = distribution_of(losses[l])) {
      for (std::size_t b = 0; b < bins; ++b) {
        report.pdf.push_back(dist->pdf(0.5 * (report.histogram.edges[b] + report.histogram.edges[b + 1])));
      }
    }
    out.push_back(std::move(report));
  }
  if (out.empty()) throw DataError("no successful runs to build a threshold histogram from");
  return out;
}

CsvTable aggregate_csv(const ExperimentResult& result) {
  CsvTable t;
  t.header = {"loss", "runs", "success", "out_of_support"};
  for (const char* name : {"epochs", "tau_star", "score_tau_star", "score_half", "test_score_tau_star",
                           "test_score_half"}) {
    t.header.push_back(std::string(name) + "_mean");
    t.header.push_back(std::string(name) + "_std");
  }
  for (const auto& row : result.aggregate) {
    std::vector<std::string> cells = {row.loss, std::to_string(row.runs), std::to_string(row.success),
                                      std::to_string(row.out_of_support)};
    for (const MeanStd& m : {row.epochs, row.tau_star, row.score_tau_star, row.score_half,
                             row.test_score_tau_star, row.test_score_half}) {
      cells.push_back(std::isnan(m.mean) ? "" : format_number(m.mean));
      cells.push_back(std::isnan(m.stddev) ? "" : format_number(m.stddev));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable histogram_csv(const ThresholdDistributionReport& report) {
  CsvTable t;
  t.header = {"bin_left", "bin_right", "count", "density", "pdf"};
  const auto& h = report.histogram;
  for (std::size_t b = 0; b < h.densities.size(); ++b) {
    t.rows.push_back({format_number(h.edges[b]), format_number(h.edges[b + 1]), std::to_string(h.counts[b]),
                      format_number(h.densities[b]), report.pdf.empty() ? "" : format_number(report.pdf[b])});
  }
  return t;
}

}  // namespace sol
