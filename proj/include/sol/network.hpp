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
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sol/confusion.hpp"
#include "sol/errors.hpp"
#include "sol/scores.hpp"

namespace sol {

/// Fully connected feed-forward classifier: ReLU hidden layers followed by a
/// single sigmoid output unit.
struct NetworkSpec {
  /// Input width, hidden widths..., 1.
  std::vector<std::size_t> layer_widths;

  std::size_t input_width() const { return layer_widths.front(); }
  std::size_t layer_count() const { return layer_widths.size() - 1; }
  /// Throws ConfigError unless there are at least two widths, all positive,
  /// with a final width of 1.
  void validate() const;

  static NetworkSpec with_hidden(std::size_t inputs, const std::vector<std::size_t>& hidden);
};

using LayerWeights = Eigen::Map<Eigen::MatrixXd>;
using ConstLayerWeights = Eigen::Map<const Eigen::MatrixXd>;
using LayerBias = Eigen::Map<Eigen::VectorXd>;
using ConstLayerBias = Eigen::Map<const Eigen::VectorXd>;

/// All trainable parameters, stored contiguously. Layer l contributes a
/// (out x in) weight matrix followed by an `out` bias vector. The same type
/// is used for gradients and optimizer moments.
class WeightSet {
 public:
  WeightSet() = default;
  /// All-zero parameters shaped for `spec`.
  explicit WeightSet(const NetworkSpec& spec);

  const std::vector<std::size_t>& layer_widths() const { return widths_; }
  std::size_t layer_count() const { return widths_.empty() ? 0 : widths_.size() - 1; }

  LayerWeights weights(std::size_t layer);
  ConstLayerWeights weights(std::size_t layer) const;
  LayerBias bias(std::size_t layer);
  ConstLayerBias bias(std::size_t layer) const;

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t size() const { return params_.size(); }

  bool same_shape(const NetworkSpec& spec) const { return widths_ == spec.layer_widths; }

  friend bool operator==(const WeightSet&, const WeightSet&) = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + widths_[layer] * widths_[layer + 1];
  }

  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

/// He-uniform for ReLU layers, Glorot-uniform for the output layer, zero biases.
WeightSet initialize_weights(const NetworkSpec& spec, Rng& rng);

/// Versioned plain-text checkpoint: header "sol-weights 1", the layer widths,
/// then per layer the weight matrix in row-major order and the bias vector.
/// Values are written with 17 significant digits so they round-trip exactly.
void save_weights(std::ostream& out, const WeightSet& weights);
WeightSet load_weights(std::istream& in);

/// Sigmoid outputs for each row of `inputs` (n x d).
Eigen::VectorXd forward(const NetworkSpec& spec, const WeightSet& weights,
                        const Eigen::MatrixXd& inputs);

/// Standard binary cross entropy with predictions clamped to [1e-7, 1 - 1e-7].
struct CrossEntropy {
  friend bool operator==(const CrossEntropy&, const CrossEntropy&) = default;
};

using LossSpec = std::variant<SolLoss, CrossEntropy>;

enum class Regularizer { None, L2 };

/// loss(predictions, labels) + lambda * R(w), with R(w) the sum of squared
/// weight-matrix entries (biases are not penalized).
struct ObjectiveSpec {
  LossSpec loss = CrossEntropy{};
  double lambda = 0.0;
  Regularizer regularizer = Regularizer::None;

  void validate() const;
};

std::string loss_label(const LossSpec& loss);

double cross_entropy(const LabeledBatch& batch);
std::vector<double> cross_entropy_gradient(const LabeledBatch& batch);

double loss_value(const LossSpec& loss, const LabeledBatch& batch);
/// d(loss)/d(prediction_i).
std::vector<double> loss_gradient(const LossSpec& loss, const LabeledBatch& batch);

double regularization(const WeightSet& weights, Regularizer regularizer);

double objective_value(const NetworkSpec& spec, const WeightSet& weights,
                       const Eigen::MatrixXd& inputs, std::span<const int> labels,
                       const ObjectiveSpec& objective);

/// Reverse-mode gradient of the objective w.r.t. every parameter. ReLU has
/// derivative 0 at exactly 0.
WeightSet objective_gradient(const NetworkSpec& spec, const WeightSet& weights,
                             const Eigen::MatrixXd& inputs, std::span<const int> labels,
                             const ObjectiveSpec& objective);

/// Adam moments for one parameter vector.
struct AdamSettings {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamOptimizer {
 public:
  AdamOptimizer(AdamSettings settings, std::size_t parameter_count);
  void step(WeightSet& weights, const WeightSet& gradient);

 private:
  AdamSettings settings_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  long step_count_ = 0;
};

}  // namespace sol
