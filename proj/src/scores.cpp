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

#include "sol/scores.hpp"

#include <cassert>
#include <string>

#include "sol/errors.hpp"

namespace sol {

namespace {

// 0/0 := 0. With nonnegative entries every denominator below dominates its
// numerator, so a zero denominator implies a zero numerator.
double ratio(double numerator, double denominator) {
  if (denominator == 0.0) {
    assert(numerator == 0.0);
    return 0.0;
  }
  return numerator / denominator;
}

// d/dx of a / b evaluated as coefficient / b^2; zero at the degenerate point.
double over_square(double coefficient, double denominator) {
  return denominator == 0.0 ? 0.0 : coefficient / (denominator * denominator);
}

}  // namespace

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "accuracy") return ScoreKind::Accuracy;
  if (name == "f1") return ScoreKind::F1;
  if (name == "tss") return ScoreKind::TSS;
  if (name == "csi") return ScoreKind::CSI;
  throw ConfigError("unknown score '" + std::string(name) + "' (expected accuracy, f1, tss or csi)");
}

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::Accuracy: return "accuracy";
    case ScoreKind::F1: return "f1";
    case ScoreKind::TSS: return "tss";
    case ScoreKind::CSI: return "csi";
  }
  return "unknown";
}

bool is_linear_on_rows(ScoreKind kind) {
  return kind == ScoreKind::Accuracy || kind == ScoreKind::TSS;
}

double score_value(ScoreKind kind, const ExpectedConfusion& cm) {
  switch (kind) {
    case ScoreKind::Accuracy:
      return ratio(cm.tp + cm.tn, cm.tp + cm.tn + cm.fp + cm.fn);
    case ScoreKind::F1:
      return ratio(2.0 * cm.tp, 2.0 * cm.tp + cm.fp + cm.fn);
    case ScoreKind::TSS:
      return ratio(cm.tp, cm.tp + cm.fn) + ratio(cm.tn, cm.tn + cm.fp) - 1.0;
    case ScoreKind::CSI:
      return ratio(cm.tp, cm.tp + cm.fp + cm.fn);
  }
  return 0.0;
}

std::array<double, 4> score_gradient_wrt_entries(ScoreKind kind, const ExpectedConfusion& cm) {
  const double tn = cm.tn, fp = cm.fp, fn = cm.fn, tp = cm.tp;
  switch (kind) {
    case ScoreKind::Accuracy: {
      const double total = tn + fp + fn + tp;
      const double right = tn + tp;
      const double wrong = fp + fn;
      return {over_square(wrong, total), over_square(-right, total), over_square(-right, total),
              over_square(wrong, total)};
    }
    case ScoreKind::F1: {
      const double d = 2.0 * tp + fp + fn;
      return {0.0, over_square(-2.0 * tp, d), over_square(-2.0 * tp, d),
              over_square(2.0 * (fp + fn), d)};
    }
    case ScoreKind::TSS: {
      const double neg = tn + fp;
      const double pos = tp + fn;
      return {over_square(fp, neg), over_square(-tn, neg), over_square(-tp, pos),
              over_square(fn, pos)};
    }
    case ScoreKind::CSI: {
      const double d = tp + fp + fn;
      return {0.0, over_square(-tp, d), over_square(-tp, d), over_square(fp + fn, d)};
    }
  }
  return {0.0, 0.0, 0.0, 0.0};
}

double sol_loss(const SolLoss& loss, const LabeledBatch& batch) {
  return -score_value(loss.score, expected_cm(batch, loss.dist));
}

std::vector<double> sol_loss_gradient(const SolLoss& loss, const LabeledBatch& batch) {
  const auto cm = expected_cm(batch, loss.dist);
  const auto g = score_gradient_wrt_entries(loss.score, cm);
  const auto partials = expected_cm_gradient(batch, loss.dist);
  std::vector<double> out(batch.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& d = partials[i];
    out[i] = -(g[0] * d.tn + g[1] * d.fp + g[2] * d.fn + g[3] * d.tp);
  }
  return out;
}

}  // namespace sol
