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

#include "sol/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sol/errors.hpp"

namespace sol {

namespace {

template <std::size_t N>
std::size_t pick(Rng& rng, const std::array<double, N>& weights) {
  std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
  return d(rng);
}

std::string fixed(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return format_number(std::round(v * scale) / scale);
}

}  // namespace

CsvTable make_adult_like(std::size_t rows, std::uint64_t seed, double missing_rate) {
  if (rows == 0) throw std::invalid_argument("rows must be positive");
  static const std::array<std::string, 4> workclass = {"Private", "Self-emp", "Government", "Other"};
  static const std::array<std::string, 5> education = {"HS-grad", "Some-college", "Bachelors", "Masters",
                                                       "Doctorate"};
  static const std::array<int, 5> education_num = {9, 10, 13, 14, 16};
  static const std::array<std::string, 3> marital = {"Married", "Never-married", "Divorced"};
  static const std::array<std::string, 5> occupation = {"Craft", "Sales", "Exec-managerial", "Prof-specialty",
                                                        "Service"};
  static const std::array<std::string, 2> sex = {"Male", "Female"};
  static const std::array<std::string, 4> country = {"United-States", "Mexico", "India", "Germany"};

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CsvTable t;
  t.header = {"age", "workclass", "education", "education-num", "marital-status", "occupation", "sex",
              "hours-per-week", "capital-gain", "native-country", "income"};
  for (std::size_t r = 0; r < rows; ++r) {
    const bool cycling = r < 5;
    const std::size_t wc = cycling ? r % 4 : pick(rng, std::array{0.7, 0.12, 0.13, 0.05});
    const std::size_t ed = cycling ? r % 5 : pick(rng, std::array{0.35, 0.3, 0.2, 0.1, 0.05});
    const std::size_t ms = cycling ? r % 3 : pick(rng, std::array{0.47, 0.33, 0.2});
    const std::size_t oc = cycling ? r % 5 : pick(rng, std::array{0.25, 0.2, 0.2, 0.2, 0.15});
    const std::size_t sx = cycling ? r % 2 : pick(rng, std::array{0.67, 0.33});
    const std::size_t co = cycling ? r % 4 : pick(rng, std::array{0.9, 0.04, 0.03, 0.03});

    const double age = std::clamp(38.0 + 13.0 * normal(rng), 17.0, 90.0);
    const double hours = std::clamp(40.0 + 12.0 * normal(rng), 1.0, 99.0);
    const double gain = unit(rng) < 0.08 ? std::exp(8.0 + 1.2 * normal(rng)) : 0.0;

    double logit = -2.5;
    logit += 0.045 * (age - 38.0) - 0.0006 * (age - 45.0) * (age - 45.0);
    logit += 0.35 * (education_num[ed] - 10.0);
    logit += ms == 0 ? 1.1 : -0.6;
    logit += oc == 2 || oc == 3 ? 0.7 : (oc == 4 ? -0.8 : 0.0);
    logit += sx == 0 ? 0.3 : -0.3;
    logit += 0.03 * (hours - 40.0);
    logit += gain > 0.0 ? 1.5 : 0.0;
    logit += wc == 1 ? 0.3 : 0.0;
    // Logistic label noise keeps the classes overlapping.
    const double u = std::clamp(unit(rng), 1e-12, 1.0 - 1e-12);
    const bool rich = logit + std::log(u / (1.0 - u)) > 0.0;

    std::vector<std::string> row = {
        fixed(age, 0),
        (!cycling && unit(rng) < missing_rate) ? "?" : workclass[wc],
        education[ed],
        std::to_string(education_num[ed]),
        marital[ms],
        (!cycling && unit(rng) < missing_rate) ? "?" : occupation[oc],
        sex[sx],
        fixed(hours, 0),
        fixed(gain, 0),
        country[co],
        rich ? ">50K" : "<=50K",
    };
    t.rows.push_back(std::move(row));
  }
  return t;
}

PreprocessPlan adult_like_plan() {
  PreprocessPlan plan;
  plan.missing_token = "?";
  LabelRule label;
  label.mode = LabelRule::Mode::Match;
  label.column = "income";
  label.positive_values = {">50K"};
  plan.label = label;
  plan.drop_columns = {"education"};
  plan.indicators = {{"native-country", "United-States"}};
  plan.standardize = true;
  return plan;
}

CsvTable make_pollution_like(std::size_t hours, std::uint64_t seed, double positive_rate) {
  if (hours < 2) throw std::invalid_argument("need at least two hours");
  if (!(positive_rate > 0.0 && positive_rate < 1.0)) throw std::invalid_argument("positive_rate must lie in (0,1)");
  static const std::array<std::string, 4> wind = {"NE", "NW", "SE", "cv"};

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Hour {
    int year, month, day, hour;
    double dewp, temp, pres, iws;
    int snow, rain;
    std::size_t cbwd;
    double log_pm;
  };
  std::vector<Hour> data;
  data.reserve(hours);

  double log_pm = 4.0;
  double weather = 0.0;  // slowly varying stagnation index
  double iws = 0.0;
  int snow = 0;
  int rain = 0;
  std::size_t cbwd = 0;
  for (std::size_t h = 0; h < hours; ++h) {
    const int day_index = static_cast<int>(h / 24);
    const int year = 2010 + day_index / 365;
    const int day_of_year = day_index % 365;
    const int month = std::min(12, day_of_year / 31 + 1);
    const int day = day_of_year % 31 + 1;
    const int hour = static_cast<int>(h % 24);
    const double season = std::cos(2.0 * std::numbers::pi * day_of_year / 365.0);  // +1 in winter

    weather = 0.9 * weather + 0.3 * normal(rng);
    if (unit(rng) < 0.05) cbwd = static_cast<std::size_t>(unit(rng) * 4.0) % 4;
    const bool northerly = cbwd == 1;  // clean air
    iws = (h > 0 && data.back().cbwd == cbwd) ? iws + 1.0 + 3.0 * unit(rng) : 1.0 + 3.0 * unit(rng);
    const double temp = 12.0 - 14.0 * season + 4.0 * std::sin(2.0 * std::numbers::pi * (hour - 9) / 24.0) +
                        2.0 * normal(rng);
    const double dewp = temp - 8.0 - 3.0 * std::abs(normal(rng)) + 3.0 * weather;
    const double pres = 1016.0 + 10.0 * season - 2.0 * weather + normal(rng);
    snow = (temp < 0.0 && unit(rng) < 0.02) ? snow + 1 : 0;
    rain = (temp > 5.0 && unit(rng) < 0.03) ? rain + 1 : 0;

    const double drift = 4.2 + 0.1 * season + 0.45 * weather - (northerly ? 0.5 : 0.0) -
                         0.004 * std::min(iws, 200.0) - 0.3 * (rain > 0);
    log_pm = 0.9 * log_pm + 0.1 * drift + 0.12 * normal(rng);
    data.push_back({year, month, day, hour, dewp, temp, pres, iws, snow, rain, cbwd, log_pm});
  }

  // Rescale so that a fraction positive_rate of hours exceeds 400.
  std::vector<double> sorted;
  sorted.reserve(hours);
  for (const auto& d : data) sorted.push_back(d.log_pm);
  std::sort(sorted.begin(), sorted.end());
  const auto idx = static_cast<std::size_t>(std::floor((1.0 - positive_rate) * static_cast<double>(hours - 1)));
  const double pivot = 0.5 * (sorted[idx] + sorted[std::min(idx + 1, hours - 1)]);
  const double shift = std::log(400.0) - pivot;

  CsvTable t;
  t.header = {"No", "year", "month", "day", "hour", "pm2.5", "DEWP", "TEMP", "PRES", "cbwd", "Iws", "Is", "Ir"};
  for (std::size_t h = 0; h < hours; ++h) {
    const auto& d = data[h];
    t.rows.push_back({std::to_string(h + 1), std::to_string(d.year), std::to_string(d.month),
                      std::to_string(d.day), std::to_string(d.hour), fixed(std::exp(d.log_pm + shift), 1),
                      fixed(d.dewp, 0), fixed(d.temp, 0), fixed(d.pres, 0), wind[d.cbwd], fixed(d.iws, 2),
                      std::to_string(d.snow), std::to_string(d.rain)});
  }
  return t;
}

PreprocessPlan pollution_like_plan(double level) {
  PreprocessPlan plan;
  plan.missing_token = "NA";
  LabelRule label;
  label.mode = LabelRule::Mode::FutureLevel;
  label.column = "pm2.5";
  label.level = level;
  plan.label = label;
  plan.drop_columns = {"No"};
  plan.standardize = true;
  return plan;
}

}  // namespace sol
