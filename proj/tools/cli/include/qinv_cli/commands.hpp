// Copyright 2026 The qinv Authors
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

#include <ostream>
#include <string>
#include <vector>

#include "qinv_cli/config.hpp"

namespace qinv::cli {

enum ExitCode : int { kExitPass = 0, kExitVerificationFailed = 1, kExitConfigError = 2 };

struct Verification {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CommandResult {
  std::vector<Verification> verifications;
  std::string artifact;  // CSV or JSON text
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand. ConfigError propagates; numerical failures such as
/// IntegrationError are reported as a failed verification.
CommandResult execute(const RunConfig& cfg);

/// execute(), then writes the artifact (atomically to cfg.output.path, or
/// to `data` when no path is set) and one PASS/FAIL line per verification
/// to `report`. Returns the process exit code.
int run(const RunConfig& cfg, std::ostream& data, std::ostream& report);

}  // namespace qinv::cli
