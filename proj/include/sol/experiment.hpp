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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sol/csv.hpp"
#include "sol/ingest.hpp"
#include "sol/network.hpp"
#include "sol/threshold_opt.hpp"
#include "sol/train.hpp"

namespace sol {

enum class DataKind { File, AdultLike, PollutionLike };

struct DataSource {
  DataKind kind = DataKind::AdultLike;
  std::filesystem::path path;  // File only
  std::size_t rows = 2000;     // generators only
  std::uint64_t seed = 1;      // generators only
  double positive_rate = 0.014;  // pollution generator only

  CsvTable load() const;
};

enum class ResampleKind { Subsample, Windows };

struct ResampleRule {
  ResampleKind kind = ResampleKind::Subsample;
  /// Subsample: fraction of rows used for training, the rest is held out.
  double train_fraction = 0.8;
  /// Windows: chronological train/test windows shifted by `shift` rows.
  std::size_t train_length = 0;
  std::size_t test_length = 0;
  std::size_t shift = 0;
};

struct ExperimentConfig {
  DataSource data;
  PreprocessPlan plan;
  std::vector<std::size_t> hidden = {16, 8};
  /// Template for every run; the loss and seed are replaced per run.
  TrainConfig train;
  std::vector<LossSpec> losses;
  /// Score maximized by the threshold sweep and reported in the aggregates.
  ScoreKind score = ScoreKind::F1;
  std::size_t repeats = 30;
  ResampleRule resample;
  std::uint64_t seed = 1;
  std::size_t histogram_bins = 20;
  std::size_t jobs = 1;

  /// Throws ConfigError on invalid settings.
  void validate() const;
};

/// Outcome of one (repeat, loss) run. Score fields are NaN when the run
/// failed or when there is no test portion.
struct RunRecord {
  std::size_t repeat = 0;
  std::size_t loss_index = 0;
  std::string loss;
  bool success = false;
  std::string failure;  // empty, "stuck" or the numeric error message
  bool out_of_support = false;
  int epochs = 0;
  double tau_star = 0.0;
  double train_score_tau_star = 0.0;
  double train_score_half = 0.0;
  double test_score_tau_star = 0.0;
  double test_score_half = 0.0;
  std::size_t train_rows = 0;
  std::size_t train_positives = 0;
  std::size_t test_rows = 0;
  std::size_t test_positives = 0;
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

/// Mean and population standard deviation; NaN for an empty input.
MeanStd mean_std(std::span<const double> values);

struct AggregateRow {
  std::string loss;
  std::size_t runs = 0;
  std::size_t success = 0;
  std::size_t out_of_support = 0;
  MeanStd epochs;
  MeanStd tau_star;
  MeanStd score_tau_star;
  MeanStd score_half;
  MeanStd test_score_tau_star;
  MeanStd test_score_half;
};

struct ExperimentResult {
  std::string score;
  std::vector<AggregateRow> aggregate;  // one row per loss, in grid order
  std::vector<RunRecord> runs;          // ordered by (repeat, loss)
  std::size_t features = 0;
  std::size_t rows = 0;
  std::size_t positives = 0;
};

/// Seeds: the resample of repeat r uses derive_seed(seed, r, 1) and the
/// training run derive_seed(seed, r, 2), so every loss in the grid sees the
/// same data split and initialization for a given repeat. Runs are executed
/// in parallel; the result does not depend on the job count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Aggregation over successful runs only; counts cover all runs.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs, const std::vector<LossSpec>& losses);

struct ThresholdDistributionReport {
  std::string loss;
  ThresholdHistogram histogram;
  /// Loss threshold pdf at the bin centers; empty for cross entropy.
  std::vector<double> pdf;
};

/// Histogram of tau* per loss over successful runs. Losses without a
/// successful run are skipped; throws DataError when no run succeeded.
std::vector<ThresholdDistributionReport> threshold_distribution_report(const ExperimentResult& result,
                                                                       const std::vector<LossSpec>& losses,
                                                                       std::size_t bins);

CsvTable aggregate_csv(const ExperimentResult& result);
CsvTable histogram_csv(const ThresholdDistributionReport& report);

}  // namespace sol
