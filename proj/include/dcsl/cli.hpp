// Copyright 2026 The dcsl Authors
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
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace dcsl::cli {

/// Resolved configuration of one run. `config` is flat and complete: a run
/// is fully determined by (subcommand, config).
struct RunConfig {
  std::string subcommand;
  nlohmann::json config;
  std::filesystem::path out_dir;
  int threads = 1;
};

/// Default configuration of a subcommand, optionally overlaid with a preset
/// (fig1, ghirardi1990, adler2007).
nlohmann::json default_config(const std::string& subcommand, const std::string& preset = "");

/// Executes a resolved run and writes its outputs plus manifest.json into
/// out_dir. Summary lines go to `log`.
void execute(const RunConfig& run, std::ostream& log);

/// Full command-line entry point. Exit status 0 on success; on failure a
/// one-line JSON error object goes to `err` and the status is nonzero.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace dcsl::cli
