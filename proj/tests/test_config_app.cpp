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

#include <fstream>
#include <sstream>

#include "sol/app.hpp"
#include "sol/config.hpp"
#include "test_util.hpp"

#ifndef SOL_TEST_DATA_DIR
#error "SOL_TEST_DATA_DIR must point at tests/data"
#endif

namespace sol {
namespace {

const std::string kFixture = std::string(SOL_TEST_DATA_DIR) + "/mini_adult.csv";

std::string adult_prepare_config(const std::string& path) {
  Json j = {{"schema_version", 1},
            {"data", {{"source", "file"}, {"path", path}}},
            {"plan",
             {{"missing_token", "?"},
              {"label", {{"mode", "match"}, {"column", "income"}, {"positive", {">50K"}}}},
              {"drop_columns", {"education"}},
              {"indicators", {{{"column", "native-country"}, {"value", "United-States"}}}}}}};
  return j.dump();
}

const Artifact& artifact(const CommandOutcome& out, const std::string& name) {
  for (const auto& a : out.artifacts) {
    if (a.name == name) return a;
  }
  throw std::runtime_error("missing artifact " + name);
}

TEST(Config, SchemaVersionAndSyntax) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
  EXPECT_THROW(parse_config("{}"), ConfigError);
  EXPECT_THROW(parse_config(R"({"schema_version": 2})"), ConfigError);
  EXPECT_NO_THROW(parse_config(R"({"schema_version": 1})"));
}

TEST(Config, Overrides) {
  Json root = parse_config(R"({"schema_version": 1, "train": {"patience": 3}})");
  apply_override(root, "train.patience=7");
  apply_override(root, "train.regularizer=l2");
  apply_override(root, "seed=42");
  apply_override(root, "network.hidden=[3,2]");
  EXPECT_EQ(root["train"]["patience"], 7);
  EXPECT_EQ(root["train"]["regularizer"], "l2");
  EXPECT_EQ(root["seed"], 42);
  EXPECT_EQ(hidden_from_json(root["network"]), (std::vector<std::size_t>{3, 2}));
  EXPECT_THROW(apply_override(root, "novalue"), ConfigError);
  EXPECT_THROW(apply_override(root, "=3"), ConfigError);
}

TEST(Config, DistributionAndLossRoundTrip) {
  const auto rc = ThresholdDistribution::raised_cosine(0.5, 0.1);
  EXPECT_EQ(distribution_from_json(to_json(rc)), rc);
  EXPECT_EQ(distribution_from_json(Json{{"kind", "uniform"}}), ThresholdDistribution::uniform());
  EXPECT_THROW(distribution_from_json(Json{{"kind", "raised_cosine"}, {"mu", 0.1}, {"delta", 0.3}}), ConfigError);
  EXPECT_THROW(distribution_from_json(Json{{"kind", "gauss"}}), ConfigError);
  EXPECT_THROW(distribution_from_json(Json{{"kind", "uniform"}, {"mu", 0.5}}), ConfigError);

  const LossSpec sol = SolLoss{ScoreKind::CSI, rc};
  EXPECT_EQ(loss_from_json(to_json(sol)), sol);
  EXPECT_EQ(loss_from_json(Json{{"kind", "cross_entropy"}}), LossSpec{CrossEntropy{}});
  EXPECT_THROW(loss_from_json(Json{{"kind", "sol"}, {"score", "hss"}}), ConfigError);
  EXPECT_THROW(loss_from_json(Json{{"kind", "sol"}, {"score", "f1"}, {"extra", 1}}), ConfigError);
}

TEST(Config, TrainSettings) {
  const auto c = train_from_json(Json{{"max_epochs", 20}, {"patience", 4}, {"regularizer", "l2"}, {"lambda", 0.5}});
  EXPECT_EQ(c.max_epochs, 20);
  EXPECT_EQ(c.patience, 4);
  EXPECT_EQ(c.objective.regularizer, Regularizer::L2);
  EXPECT_EQ(c.objective.lambda, 0.5);
  EXPECT_THROW(train_from_json(Json{{"patience", "x"}}), ConfigError);
  EXPECT_THROW(train_from_json(Json{{"momentum", 0.9}}), ConfigError);
}

TEST(Config, BundledConfigsParse) {
  for (const char* name : {"adult_experiment.json", "pollution_experiment.json"}) {
    std::ifstream in(std::string(SOL_TEST_DATA_DIR) + "/../../configs/" + name);
    std::stringstream text;
    text << in.rdbuf();
    const auto c = experiment_from_json(parse_config(text.str()));
    EXPECT_GE(c.repeats, 30u) << name;
    EXPECT_GE(c.losses.size(), 3u) << name;
  }
  std::ifstream in(std::string(SOL_TEST_DATA_DIR) + "/../../configs/verify.json");
  std::stringstream text;
  text << in.rdbuf();
  const auto v = verify_from_json(parse_config(text.str()).at("verify"));
  EXPECT_EQ(v.draws, 100000u);
  EXPECT_EQ(v.distributions.size(), 3u);
}

TEST(App, Sha256) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(App, ManifestListsEveryFile) {
  const std::vector<Artifact> a{{"x.csv", "1,2\n"}, {"y.json", "{}\n"}};
  const auto m = Json::parse(manifest_json("prepare", a));
  EXPECT_EQ(m["schema_version"], 1);
  EXPECT_EQ(m["command"], "prepare");
  ASSERT_EQ(m["files"].size(), 2u);
  EXPECT_EQ(m["files"][0]["path"], "x.csv");
  EXPECT_EQ(m["files"][0]["bytes"], 4);
  EXPECT_EQ(m["files"][1]["sha256"], sha256_hex("{}\n"));
}

TEST(App, PrepareFixture) {
  const auto out = run_command("prepare", adult_prepare_config(kFixture), {});
  ASSERT_EQ(out.code, ExitCode::Ok) << out.error;
  const auto summary = Json::parse(artifact(out, "summary.json").content);
  EXPECT_EQ(summary["features"], 19);
  EXPECT_EQ(summary["rows"].get<int>(), summary["positives"].get<int>() + summary["negatives"].get<int>());
  EXPECT_EQ(summary["feature_names"].size(), 19u);
  EXPECT_NO_THROW(artifact(out, "config.json"));
}

TEST(App, PrepareIsIdempotentWithIdentityPlan) {
  const auto first = run_command("prepare", adult_prepare_config(kFixture), {});
  ASSERT_EQ(first.code, ExitCode::Ok);
  const auto dir = testing::scratch_dir("prepare_idem");
  write_outputs(dir, "prepare", first.artifacts);
  const Json identity = {{"schema_version", 1},
                         {"data", {{"source", "file"}, {"path", (dir / "encoded.csv").string()}}},
                         {"plan",
                          {{"label", {{"mode", "match"}, {"column", "label"}, {"positive", {"1"}}}},
                           {"standardize", false}}}};
  const auto second = run_command("prepare", identity.dump(), {});
  ASSERT_EQ(second.code, ExitCode::Ok) << second.error;
  EXPECT_EQ(artifact(second, "encoded.csv").content, artifact(first, "encoded.csv").content);
}

TEST(App, ErrorCategories) {
  EXPECT_EQ(run_command("prepare", "{not json", {}).code, ExitCode::Config);
  EXPECT_EQ(run_command("bogus", R"({"schema_version": 1})", {}).code, ExitCode::Config);
  EXPECT_EQ(run_command("prepare", adult_prepare_config("/nonexistent.csv"), {}).code, ExitCode::Data);

  const auto dir = testing::scratch_dir("all_missing");
  std::ofstream(dir / "m.csv") << "a,b\n1,?\n2,?\n";
  const auto missing = run_command("prepare",
                                   Json{{"schema_version", 1}, {"data", {{"source", "file"}, {"path", (dir / "m.csv").string()}}}}.dump(), {});
  EXPECT_EQ(missing.code, ExitCode::Data);
  EXPECT_TRUE(missing.artifacts.empty());

  Json train = Json::parse(adult_prepare_config(kFixture));
  train["loss"] = {{"kind", "cross_entropy"}};
  train["train"] = {{"max_epochs", 5}, {"patience", 6}};
  const auto bad = run_command("train", train.dump(), {});
  EXPECT_EQ(bad.code, ExitCode::Config);
  EXPECT_NE(bad.error.find("patience"), std::string::npos);
  EXPECT_TRUE(bad.artifacts.empty());
  EXPECT_EQ(run_command("prepare", adult_prepare_config(kFixture), {"unknown_key=1"}).code, ExitCode::Config);
}

TEST(App, TrainThenSweep) {
  Json train = Json::parse(adult_prepare_config(kFixture));
  train["loss"] = {{"kind", "sol"}, {"score", "f1"}, {"distribution", {{"kind", "uniform"}}}};
  train["network"] = {{"hidden", {4}}};
  train["train"] = {{"max_epochs", 30}, {"patience", 10}, {"learning_rate", 0.01}};
  train["score"] = "f1";
  train["seed"] = 3;
  const auto out = run_command("train", train.dump(), {});
  ASSERT_EQ(out.code, ExitCode::Ok) << out.error;
  const auto report = Json::parse(artifact(out, "train_report.json").content);
  EXPECT_EQ(report["layer_widths"], (std::vector<int>{19, 4, 1}));
  std::istringstream weights(artifact(out, "weights.txt").content);
  EXPECT_EQ(load_weights(weights).layer_widths(), (std::vector<std::size_t>{19, 4, 1}));

  const auto dir = testing::scratch_dir("train_sweep");
  write_outputs(dir, "train", out.artifacts);
  const Json sweep_cfg = {{"schema_version", 1}, {"input", (dir / "predictions.csv").string()}, {"score", "f1"}};
  const auto sw = run_command("sweep", sweep_cfg.dump(), {});
  ASSERT_EQ(sw.code, ExitCode::Ok) << sw.error;
  const auto summary = Json::parse(artifact(sw, "sweep.json").content);
  EXPECT_DOUBLE_EQ(summary["tau_star"].get<double>(), report["tau_star"].get<double>());
  EXPECT_DOUBLE_EQ(summary["best_score"].get<double>(), report["score_tau_star"].get<double>());
  EXPECT_EQ(artifact(sw, "curve.csv").content.rfind("tau,score\n", 0), 0u);

  const auto again = run_command("train", train.dump(), {});
  EXPECT_EQ(manifest_json("train", again.artifacts), manifest_json("train", out.artifacts));
}

TEST(App, SmallVerifySuite) {
  const Json cfg = {{"schema_version", 1},
                    {"seed", 5},
                    {"verify", {{"draws", 10000}, {"batches", 2}, {"max_batch_size", 10}}}};
  const auto out = run_command("verify", cfg.dump(), {});
  const auto summary = Json::parse(artifact(out, "verify_summary.json").content);
  EXPECT_EQ(out.code == ExitCode::Ok, summary["violations"] == 0);
  EXPECT_EQ(artifact(out, "verify_report.csv").content.rfind("check,parameters,lhs,rhs,std_error,asserted,pass\n", 0), 0u);
  EXPECT_EQ(run_command("verify", cfg.dump(), {"verify.draws=10"}).code, ExitCode::Config);
}

TEST(App, ExperimentAggregateRows) {
  const Json cfg = {{"schema_version", 1},
                    {"data", {{"source", "adult_like"}, {"rows", 300}, {"seed", 2}}},
                    {"plan",
                     {{"label", {{"mode", "match"}, {"column", "income"}, {"positive", {">50K"}}}},
                      {"drop_columns", {"education"}}}},
                    {"network", {{"hidden", {4}}}},
                    {"train", {{"max_epochs", 20}, {"patience", 5}, {"learning_rate", 0.01}}},
                    {"losses",
                     {{{"kind", "cross_entropy"}},
                      {{"kind", "sol"}, {"score", "f1"}, {"distribution", {{"kind", "raised_cosine"}, {"mu", 0.5}, {"delta", 0.2}}}}}},
                    {"score", "f1"},
                    {"repeats", 2},
                    {"seed", 4}};
  const auto out = run_command("experiment", cfg.dump(), {});
  ASSERT_EQ(out.code, ExitCode::Ok) << out.error;
  const auto& csv = artifact(out, "aggregate.csv").content;
  std::istringstream in(csv);
  const auto table = parse_csv(in);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[0][0], "cross_entropy");
  EXPECT_EQ(table.rows[1][0], "f1_sol_raised_cosine(0.5,0.2)");
  EXPECT_EQ(table.rows[0][1], "2");
  std::size_t lines = 0;
  for (char c : artifact(out, "runs.jsonl").content) lines += c == '\n';
  EXPECT_EQ(lines, 4u);
}

TEST(App, WriteOutputs) {
  const auto dir = testing::scratch_dir("write") / "nested";
  write_outputs(dir, "prepare", {{"a.txt", "hello"}});
  std::ifstream in(dir / "a.txt");
  std::string text;
  in >> text;
  EXPECT_EQ(text, "hello");
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
}

}  // namespace
}  // namespace sol
