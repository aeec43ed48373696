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

#include <span>
#include <vector>

#include "sol/confusion.hpp"
#include "sol/scores.hpp"

namespace sol {

struct CurvePoint {
  double tau = 0.0;
  double score = 0.0;
};

struct ThresholdSweepResult {
  double tau_star = 0.5;
  double best_score = 0.0;
  /// One point per constant piece of s(tau), evaluated at the piece midpoint.
  std::vector<CurvePoint> score_curve;
  /// The maximizing plateau that tau_star is the midpoint of.
  double plateau_lower = 0.0;
  double plateau_upper = 1.0;
};

/// Exact a-posteriori maximization of s(tau) over (0, 1).
///
/// s(tau) is constant between consecutive distinct predictions, so one
/// candidate per piece suffices: min/2, the midpoints of consecutive distinct
/// predictions, and (1 + max)/2 (pieces of zero width inside (0, 1) are
/// skipped). Adjacent maximizing pieces are merged into plateaus and tau_star
/// is the midpoint of the widest one (the lowest on ties).
ThresholdSweepResult sweep(const LabeledBatch& batch, ScoreKind kind);

struct ThresholdHistogram {
  std::vector<double> edges;      // bins + 1 values from 0 to 1
  std::vector<double> densities;  // integrate to 1 over (0, 1)
  std::vector<std::size_t> counts;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

/// Normalized histogram of optimal thresholds over equal-width bins on (0, 1).
/// Throws std::invalid_argument on empty input, a zero bin count or values
/// outside (0, 1).
ThresholdHistogram optimal_threshold_histogram(std::span<const double> tau_stars, std::size_t bins);

}  // namespace sol
