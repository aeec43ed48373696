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
#include <string_view>

#include <nlohmann/json.hpp>

#include "sol/distributions.hpp"
#include "sol/experiment.hpp"
#include "sol/ingest.hpp"
#include "sol/network.hpp"
#include "sol/train.hpp"
#include "sol/verify.hpp"

namespace sol {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parses a configuration document. Throws ConfigError on malformed JSON, a
/// missing or unsupported schema_version, or a non-object root.
Json parse_config(std::string_view text);

/// Applies "a.b.c=value". The value is read as JSON when it parses as JSON
/// and as a plain string otherwise. Intermediate objects are created.
void apply_override(Json& root, std::string_view assignment);

/// {"kind": "uniform"} or {"kind": "raised_cosine", "mu": m, "delta": d}.
ThresholdDistribution distribution_from_json(const Json& j);
Json to_json(const ThresholdDistribution& dist);

/// {"kind": "cross_entropy"} or {"kind": "sol", "score": "f1", "distribution": {...}}.
LossSpec loss_from_json(const Json& j);
Json to_json(const LossSpec& loss);

DataSource data_from_json(const Json& j);
PreprocessPlan plan_from_json(const Json& j);
std::vector<std::size_t> hidden_from_json(const Json& network);
/// Training settings; the "loss" key of the root is read by the caller.
TrainConfig train_from_json(const Json& j);
VerifySuiteConfig verify_from_json(const Json& j);
ExperimentConfig experiment_from_json(const Json& root);

/// Every key of `j` must be listed in `allowed`; throws ConfigError otherwise.
void require_keys(const Json& j, std::string_view where, std::initializer_list<std::string_view> allowed);

}  // namespace sol
