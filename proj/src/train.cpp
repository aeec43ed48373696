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

#include "sol/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sol {

void TrainConfig::validate() const {
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (patience < 1) throw ConfigError("patience must be positive");
  if (patience > max_epochs) throw ConfigError("patience must not exceed max_epochs");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation_fraction must lie in (0, 1)");
  }
  if (!(optimizer.learning_rate >= 0.0) || !std::isfinite(optimizer.learning_rate)) {
    throw ConfigError("learning_rate must be finite and >= 0");
  }
  if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) ||
      !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(optimizer.epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
  objective.validate();
}

ValidationSplit split_validation(std::span<const int> labels, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("fraction must lie in (0, 1)");
  const std::size_t n = labels.size();
  if (n < 2) throw std::invalid_argument("need at least two rows to split");
  const auto wanted = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction)));
  if (wanted >= n) throw std::invalid_argument("validation split leaves no training rows");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) (labels[i] == 1 ? pos : neg).push_back(i);

  Rng rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);

  ValidationSplit split;
  if (pos.size() >= 2 && neg.size() >= 2) {
    // Proportional allocation; each class keeps at least one row on each side.
    const double share = static_cast<double>(wanted) * static_cast<double>(pos.size()) / static_cast<double>(n);
    std::size_t vpos = static_cast<std::size_t>(std::llround(share));
    vpos = std::clamp<std::size_t>(vpos, wanted >= 2 ? 1 : 0, pos.size() - 1);
    std::size_t vneg = wanted - std::min(vpos, wanted);
    if (vneg > neg.size() - 1) {
      vneg = neg.size() - 1;
      vpos = std::min(wanted - vneg, pos.size() - 1);
    }
    split.validation.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(vpos));
    split.validation.insert(split.validation.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(vneg));
    split.train.assign(pos.begin() + static_cast<std::ptrdiff_t>(vpos), pos.end());
    split.train.insert(split.train.end(), neg.begin() + static_cast<std::ptrdiff_t>(vneg), neg.end());
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    split.validation.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(wanted));
    split.train.assign(all.begin() + static_cast<std::ptrdiff_t>(wanted), all.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  if (split.train.empty() || split.validation.empty()) {
    throw std::invalid_argument("degenerate validation split");
  }
  for (auto i : split.train) split.train_positives += static_cast<std::size_t>(labels[i]);
  for (auto i : split.validation) split.validation_positives += static_cast<std::size_t>(labels[i]);
  return split;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

std::vector<int> select(std::span<const int> values, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(values[r]);
  return out;
}

namespace {

void require_finite(double value, const char* what, int epoch) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << " became non-finite at epoch " << epoch;
    throw NumericError(msg.str());
  }
}

}  // namespace

TrainReport fit(const NetworkSpec& spec, const TrainConfig& config, const Eigen::MatrixXd& inputs,
                std::span<const int> labels) {
  spec.validate();
  config.validate();
  if (static_cast<std::size_t>(inputs.rows()) != labels.size()) {
    throw std::invalid_argument("inputs and labels differ in row count");
  }
  if (static_cast<std::size_t>(inputs.cols()) != spec.input_width()) {
    throw std::invalid_argument("input width does not match the network");
  }

  TrainReport report;
  report.split = split_validation(labels, config.validation_fraction, derive_seed(config.seed, 0, 1));
  const Eigen::MatrixXd train_x = select_rows(inputs, report.split.train);
  const std::vector<int> train_y = select(labels, report.split.train);
  const Eigen::MatrixXd val_x = select_rows(inputs, report.split.validation);
  const std::vector<int> val_y = select(labels, report.split.validation);

  Rng init_rng(derive_seed(config.seed, 0, 2));
  WeightSet weights = initialize_weights(spec, init_rng);
  AdamOptimizer adam(config.optimizer, weights.size());
  Rng batch_rng(derive_seed(config.seed, 0, 3));

  const std::size_t n_train = report.split.train.size();
  const bool full_batch = config.batch_size == 0 || config.batch_size >= n_train;
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  report.final_weights = weights;
  report.best_validation_loss = std::numeric_limits<double>::infinity();
  int since_improvement = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    if (full_batch) {
      adam.step(weights, objective_gradient(spec, weights, train_x, train_y, config.objective));
    } else {
      std::shuffle(order.begin(), order.end(), batch_rng);
      for (std::size_t start = 0; start < n_train; start += config.batch_size) {
        const std::size_t stop = std::min(n_train, start + config.batch_size);
        std::span<const std::size_t> rows(order.data() + start, stop - start);
        const auto bx = select_rows(train_x, rows);
        const auto by = select(train_y, rows);
        adam.step(weights, objective_gradient(spec, weights, bx, by, config.objective));
      }
    }
    for (double p : weights.parameters()) require_finite(p, "a network parameter", epoch);

    EpochRecord record;
    record.train_loss = objective_value(spec, weights, train_x, train_y, config.objective);
    record.validation_loss = objective_value(spec, weights, val_x, val_y, config.objective);
    require_finite(record.train_loss, "the training loss", epoch);
    require_finite(record.validation_loss, "the validation loss", epoch);
    report.history.push_back(record);
    report.epochs_run = epoch;

    if (record.validation_loss < report.best_validation_loss - kImprovementTolerance) {
      report.best_validation_loss = record.validation_loss;
      report.best_epoch = epoch;
      report.final_weights = weights;
      since_improvement = 0;
    } else if (++since_improvement >= config.patience) {
      break;
    }
  }

  const double first = report.history.front().validation_loss;
  const double improvement = first - report.best_validation_loss;
  const double scale = std::max(std::abs(first), std::numeric_limits<double>::min());
  report.success = improvement / scale >= kStuckRelativeImprovement;
  return report;
}

}  // namespace sol
