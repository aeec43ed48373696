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

#include "sol/network.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sol {

void NetworkSpec::validate() const {
  if (layer_widths.size() < 2) throw ConfigError("network needs an input width and an output width");
  for (auto w : layer_widths) {
    if (w == 0) throw ConfigError("network layer widths must be positive");
  }
  if (layer_widths.back() != 1) throw ConfigError("network output width must be 1");
}

NetworkSpec NetworkSpec::with_hidden(std::size_t inputs, const std::vector<std::size_t>& hidden) {
  NetworkSpec spec;
  spec.layer_widths.push_back(inputs);
  spec.layer_widths.insert(spec.layer_widths.end(), hidden.begin(), hidden.end());
  spec.layer_widths.push_back(1);
  return spec;
}

WeightSet::WeightSet(const NetworkSpec& spec) : widths_(spec.layer_widths) {
  spec.validate();
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    offsets_.push_back(total);
    total += widths_[l + 1] * widths_[l] + widths_[l + 1];
  }
  params_.assign(total, 0.0);
}

LayerWeights WeightSet::weights(std::size_t layer) {
  return {params_.data() + weight_offset(layer), static_cast<Eigen::Index>(widths_[layer + 1]),
          static_cast<Eigen::Index>(widths_[layer])};
}

ConstLayerWeights WeightSet::weights(std::size_t layer) const {
  return {params_.data() + weight_offset(layer), static_cast<Eigen::Index>(widths_[layer + 1]),
          static_cast<Eigen::Index>(widths_[layer])};
}

LayerBias WeightSet::bias(std::size_t layer) {
  return {params_.data() + bias_offset(layer), static_cast<Eigen::Index>(widths_[layer + 1])};
}

ConstLayerBias WeightSet::bias(std::size_t layer) const {
  return {params_.data() + bias_offset(layer), static_cast<Eigen::Index>(widths_[layer + 1])};
}

WeightSet initialize_weights(const NetworkSpec& spec, Rng& rng) {
  WeightSet w(spec);
  for (std::size_t l = 0; l < w.layer_count(); ++l) {
    const double fan_in = static_cast<double>(spec.layer_widths[l]);
    const double fan_out = static_cast<double>(spec.layer_widths[l + 1]);
    const bool output_layer = l + 1 == w.layer_count();
    const double limit =
        output_layer ? std::sqrt(6.0 / (fan_in + fan_out)) : std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> draw(-limit, limit);
    auto m = w.weights(l);
    // Row-major fill so the draw order matches the checkpoint layout.
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = draw(rng);
    }
  }
  return w;
}

void save_weights(std::ostream& out, const WeightSet& weights) {
  const auto& widths = weights.layer_widths();
  out << "sol-weights 1\n";
  out << "layers " << widths.size();
  for (auto w : widths) out << ' ' << w;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t l = 0; l < weights.layer_count(); ++l) {
    const auto m = weights.weights(l);
    out << "weights " << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c);
      out << '\n';
    }
    const auto b = weights.bias(l);
    out << "bias " << b.size() << '\n';
    for (Eigen::Index i = 0; i < b.size(); ++i) out << (i ? " " : "") << b(i);
    out << '\n';
  }
}

namespace {

void expect_token(std::istream& in, const std::string& token) {
  std::string got;
  if (!(in >> got) || got != token) {
    throw DataError("malformed weight checkpoint: expected '" + token + "', got '" + got + "'");
  }
}

template <class T>
T read_value(std::istream& in, const char* what) {
  T value{};
  if (!(in >> value)) throw DataError(std::string("malformed weight checkpoint: bad ") + what);
  return value;
}

}  // namespace

WeightSet load_weights(std::istream& in) {
  expect_token(in, "sol-weights");
  const int version = read_value<int>(in, "version");
  if (version != 1) throw DataError("unsupported weight checkpoint version " + std::to_string(version));
  expect_token(in, "layers");
  const auto count = read_value<std::size_t>(in, "layer count");
  NetworkSpec spec;
  for (std::size_t i = 0; i < count; ++i) spec.layer_widths.push_back(read_value<std::size_t>(in, "width"));
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed weight checkpoint: ") + e.what());
  }
  WeightSet w(spec);
  for (std::size_t l = 0; l < w.layer_count(); ++l) {
    auto m = w.weights(l);
    expect_token(in, "weights");
    if (read_value<Eigen::Index>(in, "rows") != m.rows() || read_value<Eigen::Index>(in, "cols") != m.cols()) {
      throw DataError("malformed weight checkpoint: weight shape mismatch");
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = read_value<double>(in, "weight");
    }
    auto b = w.bias(l);
    expect_token(in, "bias");
    if (read_value<Eigen::Index>(in, "bias size") != b.size()) {
      throw DataError("malformed weight checkpoint: bias shape mismatch");
    }
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = read_value<double>(in, "bias");
  }
  return w;
}

namespace {

double sigmoid(double h) {
  if (h >= 0.0) return 1.0 / (1.0 + std::exp(-h));
  const double e = std::exp(h);
  return e / (1.0 + e);
}

void check_shapes(const NetworkSpec& spec, const WeightSet& weights, const Eigen::MatrixXd& inputs) {
  if (!weights.same_shape(spec)) throw std::invalid_argument("weights do not match the network spec");
  if (static_cast<std::size_t>(inputs.cols()) != spec.input_width()) {
    std::ostringstream msg;
    msg << "input width " << inputs.cols() << " does not match network input width "
        << spec.input_width();
    throw std::invalid_argument(msg.str());
  }
}

// Pre-activations of every layer for one forward pass.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> pre;   // z_l, n x out_l
  std::vector<Eigen::MatrixXd> post;  // a_l; post[0] is the input
  Eigen::VectorXd output;
};

ForwardTrace trace_forward(const WeightSet& weights, const Eigen::MatrixXd& inputs) {
  ForwardTrace t;
  const std::size_t layers = weights.layer_count();
  t.post.reserve(layers + 1);
  t.post.push_back(inputs);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = t.post.back() * weights.weights(l).transpose();
    z.rowwise() += weights.bias(l).transpose();
    t.pre.push_back(z);
    if (l + 1 < layers) {
      t.post.push_back(z.cwiseMax(0.0));
    }
  }
  const auto& logits = t.pre.back();
  t.output.resize(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) t.output(i) = sigmoid(logits(i, 0));
  return t;
}

LabeledBatch make_batch(const Eigen::VectorXd& predictions, std::span<const int> labels) {
  return LabeledBatch(std::vector<double>(predictions.data(), predictions.data() + predictions.size()),
                      std::vector<int>(labels.begin(), labels.end()));
}

constexpr double kCrossEntropyClamp = 1e-7;

}  // namespace

Eigen::VectorXd forward(const NetworkSpec& spec, const WeightSet& weights,
                        const Eigen::MatrixXd& inputs) {
  check_shapes(spec, weights, inputs);
  return trace_forward(weights, inputs).output;
}

void ObjectiveSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be a finite value >= 0");
  if (regularizer == Regularizer::None && lambda != 0.0) {
    throw ConfigError("lambda must be 0 when no regularizer is selected");
  }
}

std::string loss_label(const LossSpec& loss) {
  if (const auto* sol = std::get_if<SolLoss>(&loss)) {
    return to_string(sol->score) + "_sol_" + sol->dist.label();
  }
  return "cross_entropy";
}

double cross_entropy(const LabeledBatch& batch) {
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double p = std::clamp(batch.prediction(i), kCrossEntropyClamp, 1.0 - kCrossEntropyClamp);
    total -= batch.label(i) == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return total / static_cast<double>(batch.size());
}

std::vector<double> cross_entropy_gradient(const LabeledBatch& batch) {
  const double n = static_cast<double>(batch.size());
  std::vector<double> g(batch.size(), 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double raw = batch.prediction(i);
    if (raw < kCrossEntropyClamp || raw > 1.0 - kCrossEntropyClamp) continue;  // clamp is flat
    g[i] = (batch.label(i) == 1 ? -1.0 / raw : 1.0 / (1.0 - raw)) / n;
  }
  return g;
}

double loss_value(const LossSpec& loss, const LabeledBatch& batch) {
  if (const auto* sol = std::get_if<SolLoss>(&loss)) return sol_loss(*sol, batch);
  return cross_entropy(batch);
}

std::vector<double> loss_gradient(const LossSpec& loss, const LabeledBatch& batch) {
  if (const auto* sol = std::get_if<SolLoss>(&loss)) return sol_loss_gradient(*sol, batch);
  return cross_entropy_gradient(batch);
}

double regularization(const WeightSet& weights, Regularizer regularizer) {
  if (regularizer == Regularizer::None) return 0.0;
  double total = 0.0;
  for (std::size_t l = 0; l < weights.layer_count(); ++l) total += weights.weights(l).squaredNorm();
  return total;
}

double objective_value(const NetworkSpec& spec, const WeightSet& weights,
                       const Eigen::MatrixXd& inputs, std::span<const int> labels,
                       const ObjectiveSpec& objective) {
  const auto predictions = forward(spec, weights, inputs);
  const double data = loss_value(objective.loss, make_batch(predictions, labels));
  return data + objective.lambda * regularization(weights, objective.regularizer);
}

WeightSet objective_gradient(const NetworkSpec& spec, const WeightSet& weights,
                             const Eigen::MatrixXd& inputs, std::span<const int> labels,
                             const ObjectiveSpec& objective) {
  check_shapes(spec, weights, inputs);
  const auto t = trace_forward(weights, inputs);
  const auto dloss = loss_gradient(objective.loss, make_batch(t.output, labels));

  WeightSet grad(spec);
  const std::size_t layers = weights.layer_count();
  Eigen::MatrixXd delta(t.output.size(), 1);
  for (Eigen::Index i = 0; i < t.output.size(); ++i) {
    const double y = t.output(i);
    delta(i, 0) = dloss[static_cast<std::size_t>(i)] * y * (1.0 - y);
  }
  for (std::size_t l = layers; l-- > 0;) {
    grad.weights(l) = delta.transpose() * t.post[l];
    grad.bias(l) = delta.colwise().sum().transpose();
    if (l == 0) break;
    Eigen::MatrixXd upstream = delta * weights.weights(l);
    const auto& z = t.pre[l - 1];
    delta = upstream.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
  }
  if (objective.regularizer == Regularizer::L2 && objective.lambda != 0.0) {
    for (std::size_t l = 0; l < layers; ++l) {
      grad.weights(l) += 2.0 * objective.lambda * weights.weights(l);
    }
  }
  return grad;
}

AdamOptimizer::AdamOptimizer(AdamSettings settings, std::size_t parameter_count)
    : settings_(settings), first_moment_(parameter_count, 0.0), second_moment_(parameter_count, 0.0) {}

void AdamOptimizer::step(WeightSet& weights, const WeightSet& gradient) {
  auto params = weights.parameters();
  const auto g = gradient.parameters();
  if (params.size() != first_moment_.size() || g.size() != params.size()) {
    throw std::invalid_argument("optimizer state does not match parameter count");
  }
  ++step_count_;
  const double b1 = settings_.beta1;
  const double b2 = settings_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_moment_[i] = b1 * first_moment_[i] + (1.0 - b1) * g[i];
    second_moment_[i] = b2 * second_moment_[i] + (1.0 - b2) * g[i] * g[i];
    const double m_hat = first_moment_[i] / correction1;
    const double v_hat = second_moment_[i] / correction2;
    params[i] -= settings_.learning_rate * m_hat / (std::sqrt(v_hat) + settings_.epsilon);
  }
}

}  // namespace sol
