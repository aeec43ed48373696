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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sol/network.hpp"

namespace sol {

struct TrainConfig {
  int max_epochs = 500;
  int patience = 30;
  double validation_fraction = 1.0 / 3.0;
  std::uint64_t seed = 0;
  ObjectiveSpec objective;
  AdamSettings optimizer;
  /// 0 means full batch.
  std::size_t batch_size = 0;

  /// Throws ConfigError on out-of-range settings, including patience > max_epochs.
  void validate() const;
};

/// Row indices of a train/validation partition.
struct ValidationSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::size_t train_positives = 0;
  std::size_t validation_positives = 0;
};

/// Seeded shuffle split. The validation part holds round(n * fraction) rows
/// (at least 1) and is stratified by class when both classes have >= 2
/// members. Throws std::invalid_argument if either part would be empty.
ValidationSplit split_validation(std::span<const int> labels, double fraction, std::uint64_t seed);

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const std::size_t> rows);
std::vector<int> select(std::span<const int> values, std::span<const std::size_t> rows);

struct EpochRecord {
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainReport {
  int epochs_run = 0;
  int best_epoch = 0;  // 1-based
  double best_validation_loss = 0.0;
  bool success = false;
  WeightSet final_weights;  // weights of the best validation epoch
  std::vector<EpochRecord> history;
  ValidationSplit split;
};

/// Relative improvement below which a run counts as stuck.
inline constexpr double kStuckRelativeImprovement = 1e-4;
/// A validation loss only counts as an improvement if it beats best - 1e-9.
inline constexpr double kImprovementTolerance = 1e-9;

/// Adam training with early stopping on the validation loss. Returns the
/// weights of the best validation epoch. Throws NumericError when a loss or
/// gradient becomes non-finite.
TrainReport fit(const NetworkSpec& spec, const TrainConfig& config, const Eigen::MatrixXd& inputs,
                std::span<const int> labels);

}  // namespace sol
