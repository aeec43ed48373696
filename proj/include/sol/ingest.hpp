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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sol/csv.hpp"

namespace sol {

enum class ColumnKind { Numeric, Categorical };

/// Raw table with per-column kinds. A column is numeric when every
/// non-missing cell parses as a number.
struct TabularDataset {
  std::vector<std::string> columns;
  std::vector<ColumnKind> kinds;
  std::vector<std::vector<std::string>> rows;

  static TabularDataset from_csv(const CsvTable& table, const std::string& missing_token = "?");
  std::size_t column(const std::string& name) const;
};

/// How the binary label is obtained.
struct LabelRule {
  enum class Mode {
    /// label = 1 iff the cell equals one of `positive_values` (after trimming).
    Match,
    /// label[t] = 1 iff column[t + 1] > level; the last row is dropped.
    FutureLevel,
  };
  Mode mode = Mode::Match;
  std::string column;
  std::vector<std::string> positive_values;
  double level = 0.0;
  /// Drop the label source column from the features (Match mode only).
  bool drop_source = true;
};

struct IndicatorRule {
  std::string column;
  std::string value;  // cells equal to this map to 1, everything else to 0
};

/// Declarative preprocessing steps, applied in this order: drop rows with
/// missing values, derive labels, drop columns, indicator maps, one-hot
/// encoding of categorical columns, standardization.
struct PreprocessPlan {
  std::string missing_token = "?";
  std::optional<LabelRule> label;
  std::vector<std::string> drop_columns;
  std::vector<IndicatorRule> indicators;
  /// Treated as categorical even when the cells look numeric.
  std::vector<std::string> categorical;
  bool standardize = true;
  /// Rows (of the cleaned data) whose statistics drive standardization;
  /// all rows when unset.
  std::optional<std::size_t> fit_rows;
};

struct EncodedDataset {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd features;
  std::vector<int> labels;  // empty without a label rule
  std::size_t positives() const;
};

/// Column means and scales for z-scoring. Population standard deviation; a
/// constant column keeps scale 1 (it is only centered).
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& rows);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& data) const;
};

/// Throws DataError on unknown columns or when cleaning leaves no rows.
EncodedDataset clean_and_encode(const TabularDataset& raw, const PreprocessPlan& plan);

/// label[t] = 1 iff series[t + 1] > level, for t = 0 .. n - 2. Throws
/// DataError on non-finite values or a series shorter than 2.
std::vector<int> label_by_future_level(std::span<const double> series, double level);

struct WindowPlan {
  std::size_t train_length = 0;
  std::size_t test_length = 0;
  std::size_t shift = 0;
  std::size_t repeats = 1;

  /// Throws DataError unless train + test + shift * (repeats - 1) <= rows.
  void validate(std::size_t rows) const;
};

struct Window {
  std::size_t train_begin = 0;
  std::size_t train_end = 0;  // exclusive; also the first test row
  std::size_t test_begin = 0;
  std::size_t test_end = 0;
};

/// Chronological (train, test) windows; window k starts at k * shift.
std::vector<Window> make_windows(std::size_t rows, const WindowPlan& plan);

/// Encoded features followed by a "label" column when labels are present.
CsvTable to_csv(const EncodedDataset& data);

}  // namespace sol
