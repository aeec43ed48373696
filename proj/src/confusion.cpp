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

#include "sol/confusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sol {

LabeledBatch::LabeledBatch(std::vector<double> predictions, std::vector<int> labels)
    : predictions_(std::move(predictions)), labels_(std::move(labels)) {
  if (predictions_.size() != labels_.size()) {
    throw std::invalid_argument("predictions and labels differ in length");
  }
  if (predictions_.empty()) throw std::invalid_argument("empty batch");
  for (std::size_t i = 0; i < predictions_.size(); ++i) {
    const double p = predictions_[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      std::ostringstream msg;
      msg << "prediction " << i << " outside [0, 1]: " << p;
      throw std::invalid_argument(msg.str());
    }
    if (labels_[i] != 0 && labels_[i] != 1) {
      std::ostringstream msg;
      msg << "label " << i << " is not binary: " << labels_[i];
      throw std::invalid_argument(msg.str());
    }
    positives_ += static_cast<std::size_t>(labels_[i]);
  }
}

namespace {

constexpr std::size_t kPairwiseThreshold = 10000;
constexpr std::size_t kPairwiseBlock = 128;

double pairwise(std::span<const double> values) {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise(values.first(half)) + pairwise(values.subspan(half));
}

}  // namespace

double accurate_sum(std::span<const double> values) {
  if (values.size() > kPairwiseThreshold) return pairwise(values);
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

ClassicalConfusion classical_cm(const LabeledBatch& batch, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    std::ostringstream msg;
    msg << "threshold outside (0, 1): " << tau;
    throw std::domain_error(msg.str());
  }
  ClassicalConfusion cm;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const bool predicted_positive = batch.prediction(i) > tau;
    if (batch.label(i) == 1) {
      (predicted_positive ? cm.tp : cm.fn) += 1;
    } else {
      (predicted_positive ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

ExpectedConfusion expected_cm(const LabeledBatch& batch, const ThresholdDistribution& dist) {
  const std::size_t n = batch.size();
  std::vector<double> tn(n, 0.0), fp(n, 0.0), fn(n, 0.0), tp(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = dist.cdf(batch.prediction(i));
    if (batch.label(i) == 1) {
      tp[i] = f;
      fn[i] = 1.0 - f;
    } else {
      fp[i] = f;
      tn[i] = 1.0 - f;
    }
  }
  return {accurate_sum(tn), accurate_sum(fp), accurate_sum(fn), accurate_sum(tp)};
}

std::vector<ConfusionPartials> expected_cm_gradient(const LabeledBatch& batch,
                                                    const ThresholdDistribution& dist) {
  std::vector<ConfusionPartials> partials(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double density = dist.cdf_derivative(batch.prediction(i));
    auto& d = partials[i];
    if (batch.label(i) == 1) {
      d.tp = density;
      d.fn = -density;
    } else {
      d.fp = density;
      d.tn = -density;
    }
  }
  return partials;
}

ThresholdCounter::ThresholdCounter(const LabeledBatch& batch) {
  for (std::size_t i = 0; i < batch.size(); ++i) {
    (batch.label(i) == 1 ? positive_scores_ : negative_scores_).push_back(batch.prediction(i));
  }
  std::sort(negative_scores_.begin(), negative_scores_.end());
  std::sort(positive_scores_.begin(), positive_scores_.end());
}

ClassicalConfusion ThresholdCounter::at(double tau) const {
  auto above = [tau](const std::vector<double>& sorted) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), tau);
    return static_cast<std::int64_t>(sorted.end() - it);
  };
  ClassicalConfusion cm;
  cm.fp = above(negative_scores_);
  cm.tn = static_cast<std::int64_t>(negative_scores_.size()) - cm.fp;
  cm.tp = above(positive_scores_);
  cm.fn = static_cast<std::int64_t>(positive_scores_.size()) - cm.tp;
  return cm;
}

}  // namespace sol
