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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SOLCTL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("solctl_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kTrain = R"({
  "schema_version": 1, "seed": 11,
  "data": {"source": "adult_like", "rows": 300, "seed": 4},
  "plan": {"missing_token": "?",
           "label": {"mode": "match", "column": "income", "positive": [">50K"]},
           "drop_columns": ["education"]},
  "network": {"hidden": [6]},
  "train": {"max_epochs": 40, "patience": 10, "learning_rate": 0.01},
  "loss": {"kind": "sol", "score": "tss", "distribution": {"kind": "raised_cosine", "mu": 0.5, "delta": 0.3}},
  "score": "tss"
})";

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("--version"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("fly --config x"), 2);
  EXPECT_EQ(run("train --config /nonexistent.json"), 2);
}

TEST(Cli, TrainIsByteIdenticalAcrossRuns) {
  const auto dir = scratch("determinism");
  std::ofstream(dir / "train.json") << kTrain;
  ASSERT_EQ(run("train --config " + (dir / "train.json").string() + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run("train --config " + (dir / "train.json").string() + " --out " + (dir / "b").string()), 0);
  const auto ma = slurp(dir / "a" / "manifest.json");
  ASSERT_FALSE(ma.empty());
  EXPECT_EQ(ma, slurp(dir / "b" / "manifest.json"));
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename())) << entry.path();
  }
  ASSERT_EQ(run("train --config " + (dir / "train.json").string() + " --out " + (dir / "c").string() + " --seed 12"), 0);
  EXPECT_NE(ma, slurp(dir / "c" / "manifest.json"));

  ASSERT_EQ(run("sweep --config " + (dir / "sweep.json").string()), 2);
  std::ofstream(dir / "sweep.json") << R"({"schema_version": 1, "score": "tss", "input": ")"
                                     << (dir / "a" / "predictions.csv").string() << "\"}";
  EXPECT_EQ(run("sweep --config " + (dir / "sweep.json").string() + " --out " + (dir / "s").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "s" / "sweep.json"));
}

TEST(Cli, ConfigErrorLeavesNoOutputs) {
  const auto dir = scratch("config_error");
  std::ofstream(dir / "train.json") << kTrain;
  const auto out = dir / "out";
  EXPECT_EQ(run("train --config " + (dir / "train.json").string() + " --out " + out.string() +
                " train.patience=50"),
            2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(run("train --config " + (dir / "train.json").string() + " --out " + out.string() + " bogus=1"), 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, DataErrorExitCode) {
  const auto dir = scratch("data_error");
  std::ofstream(dir / "m.csv") << "a,b\n1,?\n2,?\n";
  std::ofstream(dir / "prep.json") << R"({"schema_version": 1, "data": {"source": "file", "path": ")"
                                   << (dir / "m.csv").string() << "\"}}";
  EXPECT_EQ(run("prepare --config " + (dir / "prep.json").string() + " --out " + (dir / "out").string()), 3);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Cli, DefaultVerifySuiteReportsOnlyMadBoundViolations) {
  const auto dir = scratch("verify");
  const auto out = dir / "out";
  EXPECT_EQ(run("verify --config " + std::string(SOL_CONFIG_DIR) + "/verify.json --out " + out.string()), 5);
  std::ifstream in(out / "verify_report.csv");
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0, failures = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.back() == '0') {
      ++failures;
      EXPECT_EQ(line.rfind("mad_bound,", 0), 0u) << line;
    }
  }
  EXPECT_GT(rows, 1000u);
  EXPECT_GE(failures, 1u);
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

TEST(Cli, ExperimentSmoke) {
  const auto dir = scratch("experiment");
  std::ofstream(dir / "exp.json") << R"({
    "schema_version": 1, "seed": 2,
    "data": {"source": "pollution_like", "rows": 900, "seed": 3},
    "plan": {"label": {"mode": "future_level", "column": "pm2.5", "level": 150}},
    "network": {"hidden": [4]},
    "train": {"max_epochs": 15, "patience": 5, "learning_rate": 0.01},
    "losses": [{"kind": "cross_entropy"},
               {"kind": "sol", "score": "tss", "distribution": {"kind": "uniform"}}],
    "score": "tss", "repeats": 2,
    "resample": {"kind": "windows", "train_length": 400, "test_length": 200, "shift": 100}
  })";
  const int code = run("experiment --config " + (dir / "exp.json").string() + " --out " + (dir / "out").string() +
                       " --jobs 2");
  ASSERT_EQ(code, 0);
  for (const char* f : {"aggregate.csv", "runs.jsonl", "manifest.json", "config.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
}

}  // namespace
