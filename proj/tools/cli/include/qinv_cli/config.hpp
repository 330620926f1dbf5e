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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qinv/dephasing.hpp"
#include "qinv/lindblad.hpp"
#include "qinv/tolerances.hpp"
#include "qinv/trajectory.hpp"
#include "qinv_cli/json_io.hpp"

namespace qinv::cli {

inline constexpr std::size_t kDefaultSteps = 4000;
inline constexpr double kDefaultT = 2.0;
inline constexpr const char* kBuiltinScenario = "dephasing2q";

struct FlagOverrides {
  std::optional<long long> steps;
  std::optional<double> T;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool full = false;
};

struct Thresholds {
  double expectation = 1e-6;
  double residual = 1e-5;
  double offdiag = 1e-7;
  double spectrum = 1e-8;
  double eigenflow = 1e-5;
  double analytic = 1e-5;
  double growth_relative = 0.01;
  double zc_drift = 1e-9;
  double min_order = 1.5;
};

struct DfsSpec {
  double tol = 1e-9;
  double time = 0.0;
  std::optional<Operator> dfs_basis;   // columns
  std::optional<Operator> comp_basis;  // columns; complement of dfs_basis if absent
};

struct OutputSpec {
  std::string path;  // empty: stdout
  std::string format = "csv";
  bool full = false;
};

struct RunConfig {
  std::string command;
  /// Set when the model comes from the built-in or a described dephasing scenario.
  std::optional<dephasing::DephasingScenario> scenario;
  std::optional<LindbladModel> model;
  TimeGrid grid{kDefaultT, kDefaultSteps};
  Tolerances tol;
  Thresholds thresholds;
  std::optional<Operator> initial_state;
  std::optional<Operator> initial_invariant;
  std::vector<std::pair<std::string, Operator>> observables;
  DfsSpec dfs;
  std::optional<Operator> id0;
  std::optional<Operator> ic0;
  OutputSpec output;

  const LindbladModel& lindblad_model() const { return *model; }
};

/// Reads, validates and applies defaults and flag overrides. Throws
/// ConfigError with a JSON pointer on any schema violation.
RunConfig parse_config(const std::string& path, const std::string& command, const FlagOverrides& flags);

/// Same, from an already parsed document.
RunConfig parse_config_json(const Json& doc, const std::string& command, const FlagOverrides& flags);

}  // namespace qinv::cli
