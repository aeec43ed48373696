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

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "sol/confusion.hpp"
#include "sol/distributions.hpp"

namespace sol {

enum class ScoreKind { Accuracy, F1, TSS, CSI };

/// Parses "accuracy", "f1", "tss" or "csi". Throws ConfigError otherwise.
ScoreKind parse_score_kind(std::string_view name);
std::string to_string(ScoreKind kind);
/// True for scores that are linear in the entries once the row sums are fixed.
bool is_linear_on_rows(ScoreKind kind);

/// Skill score of a confusion matrix. Any 0/0 ratio is taken to be 0.
double score_value(ScoreKind kind, const ExpectedConfusion& cm);
inline double score_value(ScoreKind kind, const ClassicalConfusion& cm) {
  return score_value(kind, to_real(cm));
}

/// Partial derivatives of the score w.r.t. (tn, fp, fn, tp), treating the four
/// entries as independent variables. Partials of a ratio whose denominator
/// vanishes are 0.
std::array<double, 4> score_gradient_wrt_entries(ScoreKind kind, const ExpectedConfusion& cm);

/// Score-oriented loss: minus the score of the expected confusion matrix
/// under a random threshold with law `dist`.
struct SolLoss {
  ScoreKind score = ScoreKind::Accuracy;
  ThresholdDistribution dist;

  friend bool operator==(const SolLoss&, const SolLoss&) = default;
};

double sol_loss(const SolLoss& loss, const LabeledBatch& batch);

/// d(loss)/d(prediction_i) for every sample.
std::vector<double> sol_loss_gradient(const SolLoss& loss, const LabeledBatch& batch);

}  // namespace sol
