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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "qinv/errors.hpp"
#include "qinv_cli/commands.hpp"
#include "qinv_cli/config.hpp"

namespace qinv::cli {
namespace {

Json parse(const char* text) { return Json::parse(text); }

RunConfig config(const char* text, const std::string& command, FlagOverrides flags = {}) {
  return parse_config_json(parse(text), command, flags);
}

std::string pointer_of(const char* text, const std::string& command = "propagate-state") {
  try {
    config(text, command);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<no error>";
}

// Two-level model with a dephasing dissipator, 2x2 literals.
constexpr const char* kQubit = R"({
  "model": {"dim": 2,
    "hamiltonian": [{"op": {"dim": 2, "re": [[0, 1], [1, 0]]}, "coefficient": 0.5}],
    "dissipators": [{"op": {"dim": 2, "re": [[1, 0], [0, -1]]}, "rate": 0.1}]},
  "grid": {"T": 1.0, "steps": 200},
  "observables": [{"name": "sz", "op": {"dim": 2, "re": [[1, 0], [0, -1]]}}]
})";

TEST(CliConfig, BuiltinScenarioDefaults) {
  const RunConfig cfg = config(R"({"scenario": "dephasing2q"})", "example-dephasing");
  ASSERT_TRUE(cfg.scenario.has_value());
  EXPECT_DOUBLE_EQ(cfg.grid.T, 2.0);
  EXPECT_EQ(cfg.grid.steps, 4000u);
  EXPECT_EQ(cfg.scenario->grid.steps, 4000u);
  EXPECT_DOUBLE_EQ(cfg.scenario->gamma, 0.05);
  EXPECT_EQ(cfg.lindblad_model().dim(), 4u);
  EXPECT_EQ(cfg.output.format, "csv");
}

TEST(CliConfig, StepsZeroIsRejectedWithPointer) {
  EXPECT_EQ(pointer_of(R"({"scenario": "dephasing2q", "grid": {"steps": 0}})"), "/grid/steps");
  EXPECT_EQ(pointer_of(R"({"scenario": {"steps": 0}})"), "/scenario/steps");
  EXPECT_EQ(pointer_of(R"({"scenario": "dephasing2q", "grid": {"T": -1}})"), "/grid/T");
}

TEST(CliConfig, FlagsOverrideTheDocument) {
  FlagOverrides f;
  f.steps = 123;
  f.T = 0.5;
  f.format = "json";
  const RunConfig cfg = config(R"({"scenario": "dephasing2q", "grid": {"steps": 10, "T": 3}})", "find-dfs", f);
  EXPECT_EQ(cfg.grid.steps, 123u);
  EXPECT_DOUBLE_EQ(cfg.grid.T, 0.5);
  EXPECT_EQ(cfg.output.format, "json");

  FlagOverrides bad;
  bad.steps = 0;
  try {
    config(R"({"scenario": "dephasing2q"})", "find-dfs", bad);
    FAIL() << "steps = 0 accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/grid/steps");
  }
}

TEST(CliConfig, SchemaViolationsCarryPointers) {
  EXPECT_EQ(pointer_of(R"({"scenario": "dephasing2q", "bogus": 1})"), "/bogus");
  EXPECT_EQ(pointer_of(R"({"scenario": "dephasing2q", "grid": {"dt": 1}})"), "/grid/dt");
  EXPECT_EQ(pointer_of(R"({})"), "/scenario");
  EXPECT_EQ(pointer_of(R"({"scenario": "other"})"), "/scenario");
  EXPECT_EQ(pointer_of(R"({"model": {"dim": 2,
      "hamiltonian": [{"op": {"dim": 2, "re": [[0, 1], [0, 0]]}}]}})"),
            "/model/hamiltonian/0/op");
  EXPECT_EQ(pointer_of(R"({"model": {"dim": 2,
      "dissipators": [{"op": {"dim": 2, "re": [[1, 0], [0, -1]]}, "rate": -0.1}]}})"),
            "/model/dissipators/0/rate");
  // A rate that only turns negative inside the grid.
  EXPECT_EQ(pointer_of(R"({"model": {"dim": 2,
      "dissipators": [{"op": {"dim": 2, "re": [[1, 0], [0, -1]]},
                       "rate": {"kind": "polynomial", "coefficients": [0.1, -1]}}]},
      "grid": {"T": 1, "steps": 10}})"),
            "/model/dissipators/0/rate");
  EXPECT_EQ(pointer_of(R"({"model": {"dim": 2,
      "hamiltonian": [{"op": {"dim": 2, "re": [[0, 1], [1, 0]]},
                       "coefficient": {"kind": "table", "times": [0, 1], "values": [1, 1]}}]},
      "grid": {"T": 2}})"),
            "/model/hamiltonian/0/coefficient");
  EXPECT_EQ(pointer_of(R"({"model": {"dim": 2}, "initial_state": {"dim": 2, "re": [[1, 0], [0, 1]]}})"),
            "/initial_state");
  EXPECT_EQ(pointer_of(R"({"scenario": "dephasing2q", "output": {"format": "xml"}})"), "/output/format");
  EXPECT_EQ(pointer_of(R"({"scenario": "dephasing2q", "observables": [{"name": "a,b",
      "op": {"dim": 4, "re": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}}]})"),
            "/observables/0/name");
}

TEST(CliCommands, PropagateStateCsvHeaderAndRows) {
  const CommandResult r = execute(config(kQubit, "propagate-state"));
  std::istringstream in(r.artifact);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,tr_re,purity,min_eig,sz");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 201u);
  ASSERT_EQ(r.verifications.size(), 1u);
  EXPECT_TRUE(r.verifications[0].pass);
}

TEST(CliCommands, JsonOutputIsParseable) {
  FlagOverrides f;
  f.format = "json";
  f.full = true;
  const Json doc = Json::parse(execute(config(kQubit, "propagate-state", f)).artifact);
  EXPECT_EQ(doc["columns"].size(), 5u);
  EXPECT_EQ(doc["rows"].size(), 201u);
  EXPECT_EQ(doc["states"].size(), 201u);
  EXPECT_TRUE(doc.contains("diagnostics"));
}

TEST(CliCommands, FindDfsListsTheTwoQubitSubspace) {
  const CommandResult r = execute(config(R"({"scenario": "dephasing2q"})", "find-dfs"));
  const Json doc = Json::parse(r.artifact);
  ASSERT_EQ(doc["dfs"].size(), 1u);
  const Json& d = doc["dfs"][0];
  EXPECT_EQ(d["dfs_basis"].size(), 2u);
  EXPECT_EQ(d["common_eigenvalues"].size(), 1u);
  EXPECT_DOUBLE_EQ(d["common_eigenvalues"][0]["re"].get<double>(), 0.0);
  EXPECT_EQ(doc["other_candidates"].size(), 2u);
  EXPECT_TRUE(r.verifications.at(0).pass);
}

TEST(CliCommands, NoDfsIsAVerificationFailure) {
  // sigma_x plus sigma_z dissipators share no eigenvector.
  const char* text = R"({"model": {"dim": 2, "dissipators": [
      {"op": {"dim": 2, "re": [[0, 1], [1, 0]]}, "rate": 0.1},
      {"op": {"dim": 2, "re": [[1, 0], [0, -1]]}, "rate": 0.1}]}, "grid": {"steps": 10}})";
  std::ostringstream data, report;
  EXPECT_EQ(run(config(text, "find-dfs"), data, report), kExitVerificationFailed);
  EXPECT_NE(report.str().find("FAIL dfs-found"), std::string::npos);
  EXPECT_EQ(run(config(text, "propagate-blocks"), data, report), kExitVerificationFailed);
}

TEST(CliCommands, ExplicitBasisThatIsNotADfsFails) {
  const char* text = R"({"model": {"dim": 2, "dissipators": [
      {"op": {"dim": 2, "re": [[0, 1], [1, 0]]}, "rate": 0.1}]},
      "grid": {"steps": 10},
      "dfs": {"dfs_basis": [{"re": [1, 0]}]}})";
  std::ostringstream data, report;
  EXPECT_EQ(run(config(text, "block-decompose"), data, report), kExitVerificationFailed);
  EXPECT_TRUE(data.str().empty());
}

TEST(CliCommands, ExampleDephasingNeedsAScenario) {
  try {
    execute(config(kQubit, "example-dephasing"));
    FAIL() << "accepted a plain model";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/scenario");
  }
}

TEST(CliCommands, OutputIsByteIdenticalAcrossRuns) {
  for (const char* cmd : {"propagate-blocks", "find-dfs", "eigenflow", "example-dephasing"}) {
    FlagOverrides f;
    f.steps = 200;
    const RunConfig cfg = config(R"({"scenario": "dephasing2q"})", cmd, f);
    EXPECT_EQ(execute(cfg).artifact, execute(cfg).artifact) << cmd;
  }
}

TEST(CliCommands, ExitCodesFollowVerifications) {
  std::ostringstream data, report;
  EXPECT_EQ(run(config(R"({"scenario": "dephasing2q"})", "example-dephasing"), data, report), kExitPass);
  FlagOverrides coarse;
  coarse.steps = 10;
  std::ostringstream data2, report2;
  EXPECT_EQ(run(config(R"({"scenario": "dephasing2q"})", "example-dephasing", coarse), data2, report2),
            kExitVerificationFailed);
  EXPECT_NE(report2.str().find("FAIL ID-analytic"), std::string::npos);
}

TEST(CliCommands, IntegrationFailureWritesNothing) {
  const std::string path = ::testing::TempDir() + "qinv_cli_blowup_" + std::to_string(::getpid()) + ".csv";
  std::remove(path.c_str());
  const char* text = R"({"model": {"dim": 2, "dissipators": [
      {"op": {"dim": 2, "re": [[1, 0], [0, -1]]}, "rate": 100}]}, "grid": {"T": 1, "steps": 10}})";
  RunConfig cfg = config(text, "propagate-state");
  cfg.output.path = path;
  std::ostringstream data, report;
  EXPECT_EQ(run(cfg, data, report), kExitVerificationFailed);
  EXPECT_FALSE(std::ifstream(path).good());
}

TEST(CliCommands, AtomicWriteProducesTheArtifact) {
  const std::string path = ::testing::TempDir() + "qinv_cli_out_" + std::to_string(::getpid()) + ".csv";
  RunConfig cfg = config(kQubit, "propagate-invariant");
  cfg.output.path = path;
  std::ostringstream data, report;
  EXPECT_EQ(run(cfg, data, report), kExitPass);
  EXPECT_TRUE(data.str().empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), execute(cfg).artifact);
  std::remove(path.c_str());
}

TEST(CliCommands, VerifyInvariantReportsSecondOrder) {
  FlagOverrides f;
  f.steps = 400;
  const CommandResult r = execute(config(R"({"scenario": "dephasing2q"})", "verify-invariant", f));
  const Json doc = Json::parse(r.artifact);
  EXPECT_NEAR(doc["order_estimate"].get<double>(), 2.0, 0.3);
  EXPECT_TRUE(doc["pass"].get<bool>());
}

}  // namespace
}  // namespace qinv::cli
