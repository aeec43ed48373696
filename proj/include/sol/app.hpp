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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sol {

enum class ExitCode : int {
  Ok = 0,
  Internal = 1,
  Config = 2,
  Data = 3,
  Numeric = 4,
  Verification = 5,
};

/// One output file, held in memory until the command has finished.
struct Artifact {
  std::string name;  // relative to the output directory
  std::string content;
};

struct CommandOutcome {
  ExitCode code = ExitCode::Ok;
  std::string summary;  // JSON object
  std::string error;    // empty on success
  std::vector<Artifact> artifacts;
};

/// Hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// manifest.json content listing every artifact with its size and hash.
std::string manifest_json(std::string_view command, const std::vector<Artifact>& artifacts);

/// Runs prepare, train, sweep, verify or experiment on a JSON config with
/// "key=value" overrides. Nothing is written here; exceptions are mapped to
/// exit codes (ConfigError 2, DataError 3, NumericError 4). A verify run with
/// a failed check returns Verification along with its artifacts.
CommandOutcome run_command(std::string_view subcommand, std::string_view config_text,
                           const std::vector<std::string>& overrides);

/// Writes the artifacts and manifest.json under `out_dir`, creating it.
/// Throws DataError on I/O failure.
void write_outputs(const std::filesystem::path& out_dir, std::string_view command,
                   const std::vector<Artifact>& artifacts);

}  // namespace sol
