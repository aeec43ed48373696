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

#include "sol/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sol/errors.hpp"

namespace sol {

namespace {

const Json& member(const Json& j, std::string_view where, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing key '" + key + "'");
  return j.at(key);
}

template <typename T>
T read(const Json& j, std::string_view where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (v.is_number_integer() && !(std::is_unsigned_v<T> && v.get<long long>() < 0)) return v.get<T>();
      throw ConfigError("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("");
      return v.get<T>();
    } else {
      if (!v.is_string()) throw ConfigError("");
      return v.get<T>();
    }
  } catch (const std::exception&) {
    throw ConfigError(std::string(where) + ": key '" + key + "' has the wrong type");
  }
}

std::vector<std::string> read_strings(const Json& j, std::string_view where, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const Json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string(where) + ": key '" + key + "' must be an array of strings");
  for (const auto& item : v) {
    if (!item.is_string()) throw ConfigError(std::string(where) + ": key '" + key + "' must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<double> read_numbers(const Json& j, std::string_view where, const char* key,
                                 std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  std::vector<double> out;
  if (!v.is_array()) throw ConfigError(std::string(where) + ": key '" + key + "' must be an array of numbers");
  for (const auto& item : v) {
    if (!item.is_number()) throw ConfigError(std::string(where) + ": key '" + key + "' must be an array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

template <typename T>
T required(const Json& j, std::string_view where, const char* key) {
  member(j, where, key);
  return read<T>(j, where, key, T{});
}

const Json& object(const Json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  return j;
}

}  // namespace

void require_keys(const Json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

Json parse_config(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  if (!root.contains("schema_version")) throw ConfigError("config: missing key 'schema_version'");
  const Json& v = root.at("schema_version");
  if (!v.is_number_integer() || v.get<long long>() != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  return root;
}

void apply_override(Json& root, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key has an empty component: '" + key + "'");
    if (!node->is_object()) throw ConfigError("override path is not an object: '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

ThresholdDistribution distribution_from_json(const Json& j) {
  require_keys(j, "distribution", {"kind", "mu", "delta"});
  const std::string kind = required<std::string>(j, "distribution", "kind");
  if (kind == "uniform") {
    if (j.contains("mu") || j.contains("delta")) throw ConfigError("distribution: uniform takes no parameters");
    return ThresholdDistribution::uniform();
  }
  if (kind == "raised_cosine") {
    const double mu = required<double>(j, "distribution", "mu");
    const double delta = required<double>(j, "distribution", "delta");
    try {
      return ThresholdDistribution::raised_cosine(mu, delta);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("distribution: ") + e.what());
    }
  }
  throw ConfigError("distribution: kind must be 'uniform' or 'raised_cosine'");
}

Json to_json(const ThresholdDistribution& dist) {
  if (dist.kind() == DistributionKind::Uniform) return {{"kind", "uniform"}};
  return {{"kind", "raised_cosine"}, {"mu", dist.mu()}, {"delta", dist.delta()}};
}

LossSpec loss_from_json(const Json& j) {
  require_keys(j, "loss", {"kind", "score", "distribution"});
  const std::string kind = required<std::string>(j, "loss", "kind");
  if (kind == "cross_entropy") {
    if (j.contains("score") || j.contains("distribution")) throw ConfigError("loss: cross_entropy takes no options");
    return CrossEntropy{};
  }
  if (kind == "sol") {
    SolLoss loss;
    try {
      loss.score = parse_score_kind(required<std::string>(j, "loss", "score"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("loss: ") + e.what());
    }
    loss.dist = j.contains("distribution") ? distribution_from_json(j.at("distribution"))
                                           : ThresholdDistribution::uniform();
    return loss;
  }
  throw ConfigError("loss: kind must be 'sol' or 'cross_entropy'");
}

Json to_json(const LossSpec& loss) {
  if (std::holds_alternative<CrossEntropy>(loss)) return {{"kind", "cross_entropy"}};
  const auto& s = std::get<SolLoss>(loss);
  return {{"kind", "sol"}, {"score", to_string(s.score)}, {"distribution", to_json(s.dist)}};
}

DataSource data_from_json(const Json& j) {
  require_keys(j, "data", {"source", "path", "rows", "seed", "positive_rate"});
  DataSource d;
  const std::string source = required<std::string>(j, "data", "source");
  if (source == "file") {
    d.kind = DataKind::File;
    d.path = required<std::string>(j, "data", "path");
  } else if (source == "adult_like") {
    d.kind = DataKind::AdultLike;
  } else if (source == "pollution_like") {
    d.kind = DataKind::PollutionLike;
  } else {
    throw ConfigError("data: source must be 'file', 'adult_like' or 'pollution_like'");
  }
  d.rows = read<std::size_t>(j, "data", "rows", d.rows);
  d.seed = read<std::uint64_t>(j, "data", "seed", d.seed);
  d.positive_rate = read<double>(j, "data", "positive_rate", d.positive_rate);
  return d;
}

PreprocessPlan plan_from_json(const Json& j) {
  require_keys(j, "plan", {"missing_token", "label", "drop_columns", "indicators", "categorical", "standardize"});
  PreprocessPlan plan;
  plan.missing_token = read<std::string>(j, "plan", "missing_token", plan.missing_token);
  if (j.contains("label") && !j.at("label").is_null()) {
    const Json& l = j.at("label");
    require_keys(l, "plan.label", {"mode", "column", "positive", "level", "drop_source"});
    LabelRule rule;
    const std::string mode = read<std::string>(l, "plan.label", "mode", "match");
    rule.column = read<std::string>(l, "plan.label", "column", "");
    if (rule.column.empty()) throw ConfigError("plan.label: column is required");
    if (mode == "match") {
      rule.mode = LabelRule::Mode::Match;
      rule.positive_values = read_strings(l, "plan.label", "positive");
      if (rule.positive_values.empty()) throw ConfigError("plan.label: match mode needs 'positive' values");
      rule.drop_source = read<bool>(l, "plan.label", "drop_source", true);
    } else if (mode == "future_level") {
      rule.mode = LabelRule::Mode::FutureLevel;
      if (!l.contains("level")) throw ConfigError("plan.label: future_level mode needs 'level'");
      rule.level = read<double>(l, "plan.label", "level", 0.0);
    } else {
      throw ConfigError("plan.label: mode must be 'match' or 'future_level'");
    }
    plan.label = rule;
  }
  plan.drop_columns = read_strings(j, "plan", "drop_columns");
  if (j.contains("indicators")) {
    if (!j.at("indicators").is_array()) throw ConfigError("plan: indicators must be an array");
    for (const auto& item : j.at("indicators")) {
      require_keys(item, "plan.indicators", {"column", "value"});
      plan.indicators.push_back({read<std::string>(item, "plan.indicators", "column", ""),
                                 read<std::string>(item, "plan.indicators", "value", "")});
    }
  }
  plan.categorical = read_strings(j, "plan", "categorical");
  plan.standardize = read<bool>(j, "plan", "standardize", plan.standardize);
  return plan;
}

std::vector<std::size_t> hidden_from_json(const Json& network) {
  require_keys(network, "network", {"hidden"});
  std::vector<std::size_t> hidden;
  if (!network.contains("hidden")) return {16, 8};
  if (!network.at("hidden").is_array()) throw ConfigError("network: hidden must be an array");
  for (const auto& w : network.at("hidden")) {
    if (!w.is_number_integer() || w.get<long long>() <= 0) {
      throw ConfigError("network: hidden widths must be positive integers");
    }
    hidden.push_back(w.get<std::size_t>());
  }
  return hidden;
}

TrainConfig train_from_json(const Json& j) {
  require_keys(j, "train", {"max_epochs", "patience", "validation_fraction", "batch_size", "learning_rate", "beta1",
                            "beta2", "epsilon", "lambda", "regularizer"});
  TrainConfig c;
  c.max_epochs = read<int>(j, "train", "max_epochs", c.max_epochs);
  c.patience = read<int>(j, "train", "patience", c.patience);
  c.validation_fraction = read<double>(j, "train", "validation_fraction", c.validation_fraction);
  c.batch_size = read<std::size_t>(j, "train", "batch_size", c.batch_size);
  c.optimizer.learning_rate = read<double>(j, "train", "learning_rate", c.optimizer.learning_rate);
  c.optimizer.beta1 = read<double>(j, "train", "beta1", c.optimizer.beta1);
  c.optimizer.beta2 = read<double>(j, "train", "beta2", c.optimizer.beta2);
  c.optimizer.epsilon = read<double>(j, "train", "epsilon", c.optimizer.epsilon);
  c.objective.lambda = read<double>(j, "train", "lambda", 0.0);
  const std::string reg = read<std::string>(j, "train", "regularizer", "none");
  if (reg == "none") {
    c.objective.regularizer = Regularizer::None;
  } else if (reg == "l2") {
    c.objective.regularizer = Regularizer::L2;
  } else {
    throw ConfigError("train: regularizer must be 'none' or 'l2'");
  }
  return c;
}

VerifySuiteConfig verify_from_json(const Json& j) {
  require_keys(j, "verify", {"draws", "batches", "max_batch_size", "distributions", "epsilons"});
  VerifySuiteConfig c;
  c.draws = read<std::size_t>(j, "verify", "draws", c.draws);
  c.batches = read<std::size_t>(j, "verify", "batches", c.batches);
  c.max_batch_size = read<std::size_t>(j, "verify", "max_batch_size", c.max_batch_size);
  if (j.contains("distributions")) {
    if (!j.at("distributions").is_array()) throw ConfigError("verify: distributions must be an array");
    c.distributions.clear();
    for (const auto& d : j.at("distributions")) c.distributions.push_back(distribution_from_json(d));
  }
  c.epsilons = read_numbers(j, "verify", "epsilons", c.epsilons);
  return c;
}

ExperimentConfig experiment_from_json(const Json& root) {
  ExperimentConfig c;
  const Json empty = Json::object();
  c.data = data_from_json(member(root, "config", "data"));
  c.plan = plan_from_json(member(root, "config", "plan"));
  c.hidden = hidden_from_json(root.contains("network") ? root.at("network") : empty);
  c.train = train_from_json(root.contains("train") ? root.at("train") : empty);
  const Json& losses = member(root, "config", "losses");
  if (!losses.is_array()) throw ConfigError("config: losses must be an array");
  for (const auto& l : losses) c.losses.push_back(loss_from_json(l));
  c.score = parse_score_kind(read<std::string>(root, "config", "score", "f1"));
  c.repeats = read<std::size_t>(root, "config", "repeats", c.repeats);
  c.seed = read<std::uint64_t>(root, "config", "seed", c.seed);
  c.histogram_bins = read<std::size_t>(root, "config", "histogram_bins", c.histogram_bins);
  c.jobs = read<std::size_t>(root, "config", "jobs", c.jobs);
  if (root.contains("resample")) {
    const Json& r = root.at("resample");
    require_keys(r, "resample", {"kind", "train_fraction", "train_length", "test_length", "shift"});
    const std::string kind = read<std::string>(r, "resample", "kind", "subsample");
    if (kind == "subsample") {
      c.resample.kind = ResampleKind::Subsample;
    } else if (kind == "windows") {
      c.resample.kind = ResampleKind::Windows;
    } else {
      throw ConfigError("resample: kind must be 'subsample' or 'windows'");
    }
    c.resample.train_fraction = read<double>(r, "resample", "train_fraction", c.resample.train_fraction);
    c.resample.train_length = read<std::size_t>(r, "resample", "train_length", 0);
    c.resample.test_length = read<std::size_t>(r, "resample", "test_length", 0);
    c.resample.shift = read<std::size_t>(r, "resample", "shift", 0);
  }
  c.validate();
  return c;
}

}  // namespace sol
