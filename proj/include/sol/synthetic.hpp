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

#include <cstdint>

#include "sol/csv.hpp"
#include "sol/ingest.hpp"

namespace sol {

/// Census-style table: numeric age, education-num, hours-per-week,
/// capital-gain; categorical workclass (4 levels), education (5, redundant
/// with education-num), marital-status (3), occupation (5), sex (2);
/// native-country ("United-States" or one of three others); income label
/// ">50K" / "<=50K" from a noisy logistic model (about a quarter positive).
/// Workclass and occupation contain "?" cells at `missing_rate`. The first
/// rows cycle through every level so all cardinalities are present.
CsvTable make_adult_like(std::size_t rows, std::uint64_t seed, double missing_rate = 0.02);

/// Plan matching the census task: drop education, map native-country to a
/// United-States indicator, one-hot the rest, label income == ">50K".
PreprocessPlan adult_like_plan();

/// Hourly air-quality table: No, year, month, day, hour, pm2.5, DEWP, TEMP,
/// PRES, cbwd (NE/NW/SE/cv), Iws, Is, Ir. pm2.5 follows a persistent
/// weather-driven log process rescaled so that a fraction `positive_rate` of
/// hours exceeds 400.
CsvTable make_pollution_like(std::size_t hours, std::uint64_t seed, double positive_rate = 0.014);

/// Plan matching the pollution task: label by pm2.5 above 400 one hour ahead,
/// drop the row counter, one-hot cbwd.
PreprocessPlan pollution_like_plan(double level = 400.0);

}  // namespace sol
