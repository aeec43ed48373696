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

#include "sol/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sol {

namespace {

void check_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "threshold distribution evaluated outside [0, 1]: " << x;
    throw std::domain_error(msg.str());
  }
}

}  // namespace

ThresholdDistribution ThresholdDistribution::raised_cosine(double mu, double delta) {
  if (!std::isfinite(mu) || !std::isfinite(delta) || !(mu > 0.0 && mu < 1.0) || !(delta > 0.0)) {
    throw ConfigError("raised cosine requires mu in (0,1) and delta > 0");
  }
  // A tiny slack keeps configurations such as (0.7, 0.3) valid despite rounding.
  constexpr double slack = 1e-12;
  if (mu - delta < -slack || mu + delta > 1.0 + slack) {
    std::ostringstream msg;
    msg << "raised cosine support [" << mu - delta << ", " << mu + delta
        << "] is not contained in [0, 1]";
    throw ConfigError(msg.str());
  }
  return {DistributionKind::RaisedCosine, mu, delta};
}

double ThresholdDistribution::pdf(double x) const {
  check_unit_interval(x);
  if (kind_ == DistributionKind::Uniform) return 1.0;
  if (x <= mu_ - delta_ || x >= mu_ + delta_) return 0.0;
  const double z = (x - mu_) / delta_;
  return (1.0 + std::cos(std::numbers::pi * z)) / (2.0 * delta_);
}

double ThresholdDistribution::cdf(double x) const {
  check_unit_interval(x);
  if (kind_ == DistributionKind::Uniform) return x;
  if (x <= mu_ - delta_) return 0.0;
  if (x >= mu_ + delta_) return 1.0;
  const double z = (x - mu_) / delta_;
  const double value = 0.5 * (1.0 + z + std::sin(std::numbers::pi * z) / std::numbers::pi);
  return std::clamp(value, 0.0, 1.0);
}

double ThresholdDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  if (kind_ == DistributionKind::Uniform) return p;
  double lo = lower();
  double hi = upper();
  if (p <= 0.0) return std::max(lo, 0.0);
  if (p >= 1.0) return std::min(hi, 1.0);
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ThresholdDistribution::mean() const {
  return kind_ == DistributionKind::Uniform ? 0.5 : mu_;
}

double ThresholdDistribution::variance() const {
  if (kind_ == DistributionKind::Uniform) return 1.0 / 12.0;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  return delta_ * delta_ * (pi2 - 6.0) / (3.0 * pi2);
}

std::vector<double> ThresholdDistribution::sample(Rng& rng, std::size_t count) const {
  if (count == 0) throw std::invalid_argument("sample count must be positive");
  std::vector<double> draws(count);
  for (auto& d : draws) d = sample_one(rng);
  return draws;
}

std::string ThresholdDistribution::label() const {
  if (kind_ == DistributionKind::Uniform) return "uniform";
  std::ostringstream out;
  out << "raised_cosine(" << mu_ << "," << delta_ << ")";
  return out.str();
}

}  // namespace sol
