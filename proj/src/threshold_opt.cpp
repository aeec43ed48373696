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

#include "sol/threshold_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sol {

namespace {

struct Piece {
  double lower;
  double upper;
  double score;
};

}  // namespace

ThresholdSweepResult sweep(const LabeledBatch& batch, ScoreKind kind) {
  // (prediction, label) sorted by prediction; walk upwards, moving every
  // sample at a breakpoint from "predicted positive" to "predicted negative".
  std::vector<std::pair<double, int>> items;
  items.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) items.emplace_back(batch.prediction(i), batch.label(i));
  std::sort(items.begin(), items.end());

  ClassicalConfusion cm;
  cm.tp = static_cast<std::int64_t>(batch.positives());
  cm.fp = static_cast<std::int64_t>(batch.negatives());

  std::vector<Piece> pieces;
  double lower = 0.0;
  std::size_t i = 0;
  while (true) {
    const double upper = i < items.size() ? items[i].first : 1.0;
    if (upper > lower) pieces.push_back({lower, upper, score_value(kind, cm)});
    if (i >= items.size()) break;
    const double breakpoint = items[i].first;
    for (; i < items.size() && items[i].first == breakpoint; ++i) {
      if (items[i].second == 1) {
        --cm.tp;
        ++cm.fn;
      } else {
        --cm.fp;
        ++cm.tn;
      }
    }
    lower = breakpoint;
    if (lower >= 1.0) break;
  }

  ThresholdSweepResult result;
  result.score_curve.reserve(pieces.size());
  result.best_score = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    result.score_curve.push_back({0.5 * (p.lower + p.upper), p.score});
    result.best_score = std::max(result.best_score, p.score);
  }

  double best_width = -1.0;
  for (std::size_t k = 0; k < pieces.size();) {
    if (pieces[k].score != result.best_score) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end + 1 < pieces.size() && pieces[end + 1].score == result.best_score) ++end;
    const double width = pieces[end].upper - pieces[k].lower;
    if (width > best_width) {
      best_width = width;
      result.plateau_lower = pieces[k].lower;
      result.plateau_upper = pieces[end].upper;
    }
    k = end + 1;
  }
  result.tau_star = 0.5 * (result.plateau_lower + result.plateau_upper);
  return result;
}

ThresholdHistogram optimal_threshold_histogram(std::span<const double> tau_stars, std::size_t bins) {
  if (tau_stars.empty()) throw std::invalid_argument("no thresholds to histogram");
  if (bins == 0) throw std::invalid_argument("bin count must be positive");
  ThresholdHistogram h;
  h.counts.assign(bins, 0);
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
  double sum = 0.0;
  for (double t : tau_stars) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("optimal thresholds must lie in (0, 1)");
    auto b = static_cast<std::size_t>(std::floor(t * static_cast<double>(bins)));
    ++h.counts[std::min(b, bins - 1)];
    sum += t;
  }
  const double n = static_cast<double>(tau_stars.size());
  const double width = 1.0 / static_cast<double>(bins);
  h.densities.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) h.densities[b] = static_cast<double>(h.counts[b]) / (n * width);
  h.mean = sum / n;
  double ss = 0.0;
  for (double t : tau_stars) ss += (t - h.mean) * (t - h.mean);
  h.stddev = std::sqrt(ss / n);
  return h;
}

}  // namespace sol
