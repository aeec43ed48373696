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
#include <cstdint>
#include <span>
#include <vector>

#include "sol/distributions.hpp"

namespace sol {

/// Model outputs in [0, 1] paired with binary ground-truth labels.
class LabeledBatch {
 public:
  /// Throws std::invalid_argument on length mismatch, an empty batch, a
  /// prediction outside [0, 1] or a label other than 0/1.
  LabeledBatch(std::vector<double> predictions, std::vector<int> labels);

  std::size_t size() const { return predictions_.size(); }
  std::size_t positives() const { return positives_; }
  std::size_t negatives() const { return size() - positives_; }

  std::span<const double> predictions() const { return predictions_; }
  std::span<const int> labels() const { return labels_; }
  double prediction(std::size_t i) const { return predictions_[i]; }
  int label(std::size_t i) const { return labels_[i]; }

 private:
  std::vector<double> predictions_;
  std::vector<int> labels_;
  std::size_t positives_ = 0;
};

/// 2x2 confusion matrix laid out as
///   | tn fp |
///   | fn tp |
template <class T>
struct ConfusionMatrix {
  T tn{};
  T fp{};
  T fn{};
  T tp{};

  T negatives() const { return tn + fp; }
  T positives() const { return fn + tp; }
  T total() const { return tn + fp + fn + tp; }
  T trace() const { return tn + tp; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Integer counts at a fixed threshold.
using ClassicalConfusion = ConfusionMatrix<std::int64_t>;
/// Expectation of the classical matrix over a random threshold.
using ExpectedConfusion = ConfusionMatrix<double>;
/// Per-sample partial derivatives of the four entries w.r.t. one prediction.
using ConfusionPartials = ConfusionMatrix<double>;

inline ExpectedConfusion to_real(const ClassicalConfusion& cm) {
  return {static_cast<double>(cm.tn), static_cast<double>(cm.fp), static_cast<double>(cm.fn),
          static_cast<double>(cm.tp)};
}

/// Confusion matrix at threshold tau in (0, 1). A sample is predicted positive
/// iff prediction > tau; a prediction equal to tau counts as negative.
/// Throws std::domain_error if tau is outside (0, 1).
ClassicalConfusion classical_cm(const LabeledBatch& batch, double tau);

/// Expected confusion matrix: TP = sum y F(p), FP = sum (1-y) F(p),
/// FN = sum y (1-F(p)), TN = sum (1-y)(1-F(p)).
ExpectedConfusion expected_cm(const LabeledBatch& batch, const ThresholdDistribution& dist);

/// d(entry)/d(prediction_i) for every sample. Only F depends on the
/// prediction, so each partial is +-f(p_i) gated by the label.
std::vector<ConfusionPartials> expected_cm_gradient(const LabeledBatch& batch,
                                                    const ThresholdDistribution& dist);

/// Sorted view of a batch for evaluating classical matrices at many
/// thresholds in O(log n) each.
class ThresholdCounter {
 public:
  explicit ThresholdCounter(const LabeledBatch& batch);

  ClassicalConfusion at(double tau) const;
  std::size_t negatives() const { return negative_scores_.size(); }
  std::size_t positives() const { return positive_scores_.size(); }

 private:
  std::vector<double> negative_scores_;
  std::vector<double> positive_scores_;
};

/// Sum with pairwise reduction above 10^4 terms, naive accumulation below.
double accurate_sum(std::span<const double> values);

}  // namespace sol
