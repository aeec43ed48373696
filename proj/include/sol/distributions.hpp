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

#include <string>
#include <vector>

#include "sol/errors.hpp"

namespace sol {

enum class DistributionKind { Uniform, RaisedCosine };

/// Law of the random decision threshold.
///
/// Two families are supported: the uniform law on (0, 1) and the raised
/// cosine law C(mu, delta) with density
///   (1 / 2 delta) (1 + cos(pi (x - mu) / delta))  on (mu - delta, mu + delta)
/// and zero elsewhere. Instances are immutable once constructed.
class ThresholdDistribution {
 public:
  /// Uniform on (0, 1).
  ThresholdDistribution() = default;

  static ThresholdDistribution uniform() { return {}; }
  /// Throws ConfigError unless [mu - delta, mu + delta] lies inside [0, 1].
  static ThresholdDistribution raised_cosine(double mu, double delta);

  DistributionKind kind() const { return kind_; }
  double mu() const { return mu_; }
  double delta() const { return delta_; }

  /// Support [lower, upper] of the density.
  double lower() const { return kind_ == DistributionKind::Uniform ? 0.0 : mu_ - delta_; }
  double upper() const { return kind_ == DistributionKind::Uniform ? 1.0 : mu_ + delta_; }

  /// Density at x. Zero outside the support. Throws std::domain_error if x is
  /// not in [0, 1].
  double pdf(double x) const;
  /// Distribution function at x; exactly 0 below and 1 above the support.
  double cdf(double x) const;
  /// dF/dx, i.e. the density; this is what back-propagation consumes.
  double cdf_derivative(double x) const { return pdf(x); }
  /// Inverse distribution function for p in [0, 1]. The raised cosine has no
  /// closed-form inverse and is solved by bisection to 1e-12.
  double quantile(double p) const;

  double mean() const;
  double variance() const;

  /// `count` i.i.d. draws by inverse-cdf sampling of open-interval uniforms.
  std::vector<double> sample(Rng& rng, std::size_t count) const;
  double sample_one(Rng& rng) const { return quantile(open_unit(rng)); }

  /// Short human-readable label, e.g. "uniform" or "raised_cosine(0.5,0.1)".
  std::string label() const;

  friend bool operator==(const ThresholdDistribution&, const ThresholdDistribution&) = default;

 private:
  ThresholdDistribution(DistributionKind kind, double mu, double delta)
      : kind_(kind), mu_(mu), delta_(delta) {}

  DistributionKind kind_ = DistributionKind::Uniform;
  double mu_ = 0.5;
  double delta_ = 0.5;
};

}  // namespace sol
