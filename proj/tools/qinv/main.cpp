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

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qinv/errors.hpp"
#include "qinv_cli/commands.hpp"
#include "qinv_cli/config.hpp"
#include "qinv_cli/log.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<long long> steps;
  std::optional<double> T;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool full = false;
};

void add_options(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON run configuration")->required();
  sub->add_option("--steps", o.steps, "number of uniform time steps (overrides the config)");
  sub->add_option("--T", o.T, "final time (overrides the config)");
  sub->add_option("--out", o.out, "output file; written atomically, stdout when omitted");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--full", o.full, "include full operators in JSON output");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qinv::cli;
  set_log_level(log_level_from_env());

  CLI::App app{"qinv: dynamical invariants of Markovian open quantum systems"};
  app.require_subcommand(1);
  Options opts;
  for (const auto& name : subcommands()) add_options(app.add_subcommand(name), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  FlagOverrides flags{opts.steps, opts.T, opts.out, opts.format, opts.full};
  try {
    const RunConfig cfg = parse_config(opts.config, command, flags);
    // PASS/FAIL lines go to stderr whenever data goes to stdout.
    std::ostream& report = cfg.output.path.empty() ? std::cerr : std::cout;
    return run(cfg, std::cout, report);
  } catch (const ConfigError& e) {
    std::cerr << "qinv: config error at " << (e.pointer().empty() ? "/" : e.pointer()) << ": " << e.what() << '\n';
    return kExitConfigError;
  } catch (const qinv::InvalidInput& e) {
    std::cerr << "qinv: invalid input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "qinv: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
}
