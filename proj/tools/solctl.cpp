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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sol/sol.h"

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Options& options) {
  sub->add_option("--config", options.config, "JSON config file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", options.out, "output directory")->capture_default_str();
  sub->add_option("--seed", options.seed, "master seed (overrides the config)");
  sub->add_option("--jobs", options.jobs, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  sub->add_option("overrides", options.overrides, "key=value config overrides");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score-oriented loss training, threshold sweeps and verification"};
  app.set_version_flag("--version", std::string(sol_version()));
  app.require_subcommand(1);
  Options options;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"prepare", "clean and encode a tabular dataset"},
      {"train", "train a network with a chosen loss"},
      {"sweep", "find the score-maximizing threshold for saved predictions"},
      {"verify", "run the Monte Carlo verification suite"},
      {"experiment", "repeated training runs with aggregated statistics"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : SOL_ERR_CONFIG;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();

  std::ifstream in(options.config, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  if (!in) {
    std::cerr << "error: cannot read " << options.config << "\n";
    return SOL_ERR_CONFIG;
  }

  std::vector<std::string> overrides = options.overrides;
  if (sub->count("--seed") > 0) overrides.push_back("seed=" + std::to_string(options.seed));
  if (sub->count("--jobs") > 0) overrides.push_back("jobs=" + std::to_string(options.jobs));
  std::vector<const char*> raw;
  raw.reserve(overrides.size());
  for (const auto& o : overrides) raw.push_back(o.c_str());

  char* summary = nullptr;
  const sol_status status = sol_run_command(command.c_str(), text.str().c_str(), raw.data(), raw.size(),
                                            options.out.c_str(), &summary);
  if (summary != nullptr) {
    std::cout << summary << "\n";
    sol_string_free(summary);
  }
  if (status != SOL_OK) std::cerr << "error: " << sol_last_error() << "\n";
  return status;
}
