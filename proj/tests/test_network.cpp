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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gradcheck.hpp"
#include "sol/network.hpp"
#include "test_util.hpp"

namespace sol {
namespace {

double sigmoid(double h) { return 1.0 / (1.0 + std::exp(-h)); }

TEST(Network, SpecValidation) {
  EXPECT_THROW((NetworkSpec{{3}}).validate(), ConfigError);
  EXPECT_THROW((NetworkSpec{{3, 0, 1}}).validate(), ConfigError);
  EXPECT_THROW((NetworkSpec{{3, 2}}).validate(), ConfigError);
  EXPECT_NO_THROW((NetworkSpec{{3, 1}}).validate());
  EXPECT_EQ(NetworkSpec::with_hidden(4, {5, 2}).layer_widths, (std::vector<std::size_t>{4, 5, 2, 1}));
}

TEST(Network, ZeroWeightsGiveOneHalf) {
  const auto spec = NetworkSpec::with_hidden(3, {4});
  const WeightSet w(spec);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, 3);
  const auto y = forward(spec, w, x);
  for (Eigen::Index i = 0; i < y.size(); ++i) EXPECT_EQ(y(i), 0.5);
}

TEST(Network, SingleLinearLayer) {
  const auto spec = NetworkSpec::with_hidden(2, {});
  WeightSet w(spec);
  w.weights(0)(0, 0) = 0.7;
  w.weights(0)(0, 1) = -1.3;
  w.bias(0)(0) = 0.2;
  Eigen::MatrixXd x(2, 2);
  x << 1.0, 2.0, -0.5, 0.25;
  const auto y = forward(spec, w, x);
  EXPECT_NEAR(y(0), sigmoid(0.7 - 2.6 + 0.2), 1e-15);
  EXPECT_NEAR(y(1), sigmoid(-0.35 - 0.325 + 0.2), 1e-15);
}

TEST(Network, ForwardMatchesLoopOracle) {
  Rng rng(1);
  const auto spec = NetworkSpec::with_hidden(5, {7, 3});
  auto w = initialize_weights(spec, rng);
  for (std::size_t l = 0; l < w.layer_count(); ++l) w.bias(l).setConstant(0.1);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(9, 5);
  const auto y = forward(spec, w, x);
  const auto oracle = testing::loop_forward(w, x);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    EXPECT_NEAR(y(i), oracle[static_cast<std::size_t>(i)], 1e-12);
    EXPECT_GT(y(i), 0.0);
    EXPECT_LT(y(i), 1.0);
  }
  const auto again = forward(spec, w, x);
  for (Eigen::Index i = 0; i < y.size(); ++i) EXPECT_EQ(again(i), y(i));
}

TEST(Network, ShapeMismatchThrows) {
  const auto spec = NetworkSpec::with_hidden(3, {2});
  const WeightSet w(spec);
  EXPECT_THROW(forward(spec, w, Eigen::MatrixXd::Zero(2, 4)), std::invalid_argument);
  EXPECT_THROW(forward(NetworkSpec::with_hidden(3, {3}), w, Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST(Network, InitializationRangesAndDeterminism) {
  const auto spec = NetworkSpec::with_hidden(10, {6});
  Rng a(3);
  Rng b(3);
  const auto wa = initialize_weights(spec, a);
  EXPECT_EQ(wa, initialize_weights(spec, b));
  const double he = std::sqrt(6.0 / 10.0);
  const double glorot = std::sqrt(6.0 / 7.0);
  EXPECT_LE(wa.weights(0).cwiseAbs().maxCoeff(), he);
  EXPECT_LE(wa.weights(1).cwiseAbs().maxCoeff(), glorot);
  EXPECT_EQ(wa.bias(0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Network, CheckpointRoundTrip) {
  Rng rng(4);
  const auto spec = NetworkSpec::with_hidden(4, {3, 2});
  auto w = initialize_weights(spec, rng);
  w.bias(1)(0) = 1.0 / 3.0;
  std::stringstream buf;
  save_weights(buf, w);
  EXPECT_EQ(buf.str().rfind("sol-weights 1\n", 0), 0u);
  EXPECT_EQ(load_weights(buf), w);
  std::stringstream bad("sol-weights 2\n");
  EXPECT_THROW(load_weights(bad), DataError);
  std::stringstream truncated("sol-weights 1\nlayers 2 3 1\nweights 1 3\n0.5 0.5\n");
  EXPECT_THROW(load_weights(truncated), DataError);
}

TEST(Network, ObjectiveExamples) {
  const auto spec = NetworkSpec::with_hidden(1, {});
  WeightSet w(spec);
  w.weights(0)(0, 0) = 1000.0;
  Eigen::MatrixXd x(2, 1);
  x << -1.0, 1.0;
  const std::vector<int> y{0, 1};
  ObjectiveSpec acc{SolLoss{ScoreKind::Accuracy, ThresholdDistribution::uniform()}, 0.0, Regularizer::None};
  EXPECT_EQ(objective_value(spec, w, x, y, acc), -1.0);

  const WeightSet zero(spec);
  ObjectiveSpec reg{CrossEntropy{}, 0.1, Regularizer::L2};
  EXPECT_NEAR(objective_value(spec, zero, x, y, reg), std::log(2.0), 1e-15);
  EXPECT_THROW((ObjectiveSpec{CrossEntropy{}, 0.1, Regularizer::None}).validate(), ConfigError);
  EXPECT_THROW((ObjectiveSpec{CrossEntropy{}, -1.0, Regularizer::L2}).validate(), ConfigError);
}

TEST(Network, ObjectiveIsComposition) {
  Rng rng(5);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto c = testing::random_grad_case(rng, i);
    const auto oracle = testing::loop_forward(c.weights, c.inputs);
    const LabeledBatch batch(oracle, c.labels);
    double expect = std::holds_alternative<SolLoss>(c.objective.loss)
                        ? sol_loss(std::get<SolLoss>(c.objective.loss), batch)
                        : cross_entropy(batch);
    double r = 0.0;
    if (c.objective.regularizer == Regularizer::L2) {
      for (std::size_t l = 0; l < c.weights.layer_count(); ++l) r += c.weights.weights(l).squaredNorm();
    }
    expect += c.objective.lambda * r;
    EXPECT_NEAR(objective_value(c.spec, c.weights, c.inputs, c.labels, c.objective), expect, 1e-12);
  }
}

TEST(Network, CrossEntropyClamp) {
  const LabeledBatch b({0.0, 1.0}, {1, 0});
  EXPECT_NEAR(cross_entropy(b), -std::log(1e-7), 1e-9);
  const auto g = cross_entropy_gradient(b);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.0);
  EXPECT_NEAR(cross_entropy(LabeledBatch({0.25}, {1})), -std::log(0.25), 1e-15);
}

TEST(Network, ZeroLossGradientGivesZeroGradient) {
  Rng rng(6);
  const auto spec = NetworkSpec::with_hidden(3, {4});
  auto w = initialize_weights(spec, rng);
  w.bias(1)(0) = 8.0;  // every output far above the support
  Eigen::MatrixXd x = 0.1 * Eigen::MatrixXd::Random(5, 3);
  const std::vector<int> y{0, 1, 1, 0, 1};
  ObjectiveSpec obj{SolLoss{ScoreKind::F1, ThresholdDistribution::raised_cosine(0.5, 0.1)}, 0.0, Regularizer::None};
  const auto g = objective_gradient(spec, w, x, y, obj);
  for (double v : g.parameters()) EXPECT_EQ(v, 0.0);
}

TEST(Network, SingleWeightClosedForm) {
  const auto spec = NetworkSpec::with_hidden(1, {});
  WeightSet w(spec);
  const double weight = 0.8;
  const double input = 1.5;
  w.weights(0)(0, 0) = weight;
  Eigen::MatrixXd x(1, 1);
  x << input;
  ObjectiveSpec obj{SolLoss{ScoreKind::Accuracy, ThresholdDistribution::uniform()}, 0.0, Regularizer::None};
  const double s = sigmoid(weight * input);
  const auto g = objective_gradient(spec, w, x, std::vector<int>{1}, obj);
  EXPECT_NEAR(g.weights(0)(0, 0), -1.0 * s * (1 - s) * input / 1.0, 1e-15);
  EXPECT_NEAR(g.bias(0)(0), -s * (1 - s), 1e-15);
}

TEST(Network, ReluKinkHasZeroDerivative) {
  const auto spec = NetworkSpec::with_hidden(1, {1});
  WeightSet w(spec);
  w.weights(0)(0, 0) = 1.0;
  w.weights(1)(0, 0) = 2.0;
  Eigen::MatrixXd x(1, 1);
  x << 0.0;
  const auto g = objective_gradient(spec, w, x, std::vector<int>{1}, ObjectiveSpec{});
  EXPECT_EQ(g.weights(0)(0, 0), 0.0);
  EXPECT_EQ(g.bias(0)(0), 0.0);
}

TEST(Network, GradientMatchesFiniteDifferences) {
  Rng rng(20260101);
  const std::size_t combos = testing::all_loss_kinds().size();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < 2 * combos; ++i) {
    const auto c = testing::random_grad_case(rng, i);
    const auto r = testing::gradient_check(c);
    checked += r.checked;
    EXPECT_LT(r.max_relative_error, 1e-5) << "case " << i << " loss " << loss_label(c.objective.loss);
  }
  EXPECT_GT(checked, 500u);
}

TEST(Network, L2ExcludesBiases) {
  const auto spec = NetworkSpec::with_hidden(1, {});
  WeightSet w(spec);
  w.weights(0)(0, 0) = 2.0;
  w.bias(0)(0) = 5.0;
  EXPECT_EQ(regularization(w, Regularizer::L2), 4.0);
  EXPECT_EQ(regularization(w, Regularizer::None), 0.0);
}

TEST(Network, AdamFirstStepMovesByLearningRate) {
  const auto spec = NetworkSpec::with_hidden(1, {});
  WeightSet w(spec);
  WeightSet g(spec);
  g.weights(0)(0, 0) = 3.0;
  g.bias(0)(0) = -0.5;
  AdamOptimizer adam(AdamSettings{}, w.size());
  adam.step(w, g);
  EXPECT_NEAR(w.weights(0)(0, 0), -1e-3, 1e-10);
  EXPECT_NEAR(w.bias(0)(0), 1e-3, 1e-10);
  EXPECT_THROW(adam.step(w, WeightSet(NetworkSpec::with_hidden(2, {}))), std::invalid_argument);
}

TEST(Network, LossLabels) {
  EXPECT_EQ(loss_label(CrossEntropy{}), "cross_entropy");
  EXPECT_EQ(loss_label(SolLoss{ScoreKind::TSS, ThresholdDistribution::raised_cosine(0.5, 0.1)}),
            "tss_sol_raised_cosine(0.5,0.1)");
}

}  // namespace
}  // namespace sol
