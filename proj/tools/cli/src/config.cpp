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

#include "qinv_cli/config.hpp"

#include <cmath>
#include <fstream>

#include "qinv/errors.hpp"
#include "qinv/operator.hpp"
#include "qinv/spectral.hpp"

namespace qinv::cli {

namespace {

dephasing::BlochCoefficients bloch_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(pointer, "expected [x, y, z]");
  for (std::size_t k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw ConfigError(pointer + "/" + std::to_string(k), "expected a number");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::optional<long long> integer_at(const Json& j, const std::string& key, const std::string& pointer) {
  if (!j.contains(key)) return std::nullopt;
  if (!j[key].is_number_integer()) throw ConfigError(pointer + "/" + key, "expected an integer");
  return j[key].get<long long>();
}

std::optional<double> real_at(const Json& j, const std::string& key, const std::string& pointer) {
  if (!j.contains(key)) return std::nullopt;
  return number_at(j, key, pointer);
}

void check_schedule_horizon(const CoefficientSchedule& s, double T, const std::string& pointer) {
  if (s.horizon() < T) {
    throw ConfigError(pointer, "schedule horizon " + std::to_string(s.horizon()) + " ends before T = " +
                                   std::to_string(T));
  }
}

Operator columns_from_json(const Json& j, const std::string& pointer, std::size_t dim) {
  if (!j.is_array()) throw ConfigError(pointer, "expected an array of vector literals");
  Operator out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = pointer + "/" + std::to_string(k);
    const Vector v = vector_from_json(j[k], p);
    if (static_cast<std::size_t>(v.size()) != dim) throw ConfigError(p, "expected length " + std::to_string(dim));
    out.col(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

Operator hermitian_matrix(const Json& j, const std::string& pointer, std::size_t dim, double tol) {
  const Operator m = matrix_from_json(j, pointer);
  if (static_cast<std::size_t>(m.rows()) != dim) {
    throw ConfigError(pointer + "/dim", "expected dimension " + std::to_string(dim));
  }
  if (!is_hermitian(m, tol)) throw ConfigError(pointer, "matrix is not Hermitian");
  return m;
}

dephasing::DephasingScenario scenario_from_json(const Json& j, const std::string& pointer) {
  dephasing::DephasingScenario s = dephasing::DephasingScenario::demo();
  s.grid = {kDefaultT, kDefaultSteps};
  if (j.is_string()) {
    if (j.get<std::string>() != kBuiltinScenario) {
      throw ConfigError(pointer, "unknown built-in scenario '" + j.get<std::string>() + "'");
    }
    return s;
  }
  require_known_keys(j, pointer, {"g12", "Bz", "gamma", "ID0", "IC0", "T", "steps"});
  if (j.contains("g12")) s.g12 = schedule_from_json(j["g12"], pointer + "/g12");
  if (j.contains("Bz")) s.bz = schedule_from_json(j["Bz"], pointer + "/Bz");
  if (auto g = real_at(j, "gamma", pointer)) {
    if (!(*g >= 0.0)) throw ConfigError(pointer + "/gamma", "must be >= 0");
    s.gamma = *g;
  }
  if (j.contains("ID0")) s.id0 = bloch_from_json(j["ID0"], pointer + "/ID0");
  if (j.contains("IC0")) s.ic0 = bloch_from_json(j["IC0"], pointer + "/IC0");
  return s;
}

LindbladModel model_from_json(const Json& j, const std::string& pointer, const Tolerances& tol) {
  require_known_keys(j, pointer, {"dim", "hamiltonian", "dissipators"});
  const auto dim = integer_at(j, "dim", pointer);
  if (!dim || *dim <= 0 || *dim > 64) throw ConfigError(pointer + "/dim", "expected an integer in [1, 64]");
  const auto n = static_cast<std::size_t>(*dim);
  std::vector<HamiltonianTerm> terms;
  std::vector<Dissipator> diss;
  if (j.contains("hamiltonian")) {
    const Json& h = j["hamiltonian"];
    if (!h.is_array()) throw ConfigError(pointer + "/hamiltonian", "expected an array");
    for (std::size_t i = 0; i < h.size(); ++i) {
      const std::string p = pointer + "/hamiltonian/" + std::to_string(i);
      require_known_keys(h[i], p, {"op", "coefficient"});
      if (!h[i].contains("op")) throw ConfigError(p + "/op", "missing");
      const Operator op = hermitian_matrix(h[i]["op"], p + "/op", n, tol.hermitian);
      const CoefficientSchedule c =
          h[i].contains("coefficient") ? schedule_from_json(h[i]["coefficient"], p + "/coefficient")
                                       : CoefficientSchedule::constant(1.0);
      terms.push_back({op, c});
    }
  }
  if (j.contains("dissipators")) {
    const Json& d = j["dissipators"];
    if (!d.is_array()) throw ConfigError(pointer + "/dissipators", "expected an array");
    for (std::size_t a = 0; a < d.size(); ++a) {
      const std::string p = pointer + "/dissipators/" + std::to_string(a);
      require_known_keys(d[a], p, {"op", "rate"});
      if (!d[a].contains("op")) throw ConfigError(p + "/op", "missing");
      const Operator op = matrix_from_json(d[a]["op"], p + "/op");
      if (static_cast<std::size_t>(op.rows()) != n) {
        throw ConfigError(p + "/op/dim", "expected dimension " + std::to_string(n));
      }
      const CoefficientSchedule r =
          d[a].contains("rate") ? schedule_from_json(d[a]["rate"], p + "/rate") : CoefficientSchedule::constant(1.0);
      diss.push_back({op, r});
    }
  }
  return LindbladModel(n, std::move(terms), std::move(diss), tol);
}

void apply_tolerances(const Json& j, Tolerances& tol) {
  const std::string p = "/tolerances";
  require_known_keys(j, p, {"hermitian", "ortho", "eig", "degeneracy", "trace", "psd", "dfs"});
  const auto set = [&](const char* key, double& field) {
    if (auto v = real_at(j, key, p)) {
      if (!(*v > 0.0)) throw ConfigError(p + "/" + key, "must be > 0");
      field = *v;
    }
  };
  set("hermitian", tol.hermitian);
  set("ortho", tol.ortho);
  set("eig", tol.eig);
  set("degeneracy", tol.degeneracy);
  set("trace", tol.trace);
  set("psd", tol.psd);
  set("dfs", tol.dfs);
}

void apply_thresholds(const Json& j, Thresholds& th) {
  const std::string p = "/thresholds";
  require_known_keys(j, p,
                     {"expectation", "residual", "offdiag", "spectrum", "eigenflow", "analytic", "growth_relative",
                      "zc_drift", "min_order"});
  const auto set = [&](const char* key, double& field) {
    if (auto v = real_at(j, key, p)) {
      if (!(*v > 0.0)) throw ConfigError(p + "/" + key, "must be > 0");
      field = *v;
    }
  };
  set("expectation", th.expectation);
  set("residual", th.residual);
  set("offdiag", th.offdiag);
  set("spectrum", th.spectrum);
  set("eigenflow", th.eigenflow);
  set("analytic", th.analytic);
  set("growth_relative", th.growth_relative);
  set("zc_drift", th.zc_drift);
  set("min_order", th.min_order);
}

}  // namespace

RunConfig parse_config(const std::string& path, const std::string& command, const FlagOverrides& flags) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config_json(doc, command, flags);
}

RunConfig parse_config_json(const Json& doc, const std::string& command, const FlagOverrides& flags) {
  require_known_keys(doc, "",
                     {"scenario", "model", "grid", "tolerances", "thresholds", "initial_state", "initial_invariant",
                      "observables", "dfs", "blocks", "output"});
  RunConfig cfg;
  cfg.command = command;
  if (doc.contains("tolerances")) apply_tolerances(doc["tolerances"], cfg.tol);
  if (doc.contains("thresholds")) apply_thresholds(doc["thresholds"], cfg.thresholds);

  // Grid precedence: flags, then /grid, then the scenario descriptor, then defaults.
  std::string steps_ptr = "/grid/steps", t_ptr = "/grid/T";
  std::optional<long long> steps;
  std::optional<double> T;
  if (doc.contains("scenario") && doc["scenario"].is_object()) {
    steps = integer_at(doc["scenario"], "steps", "/scenario");
    T = real_at(doc["scenario"], "T", "/scenario");
    if (steps) steps_ptr = "/scenario/steps";
    if (T) t_ptr = "/scenario/T";
  }
  if (doc.contains("grid")) {
    require_known_keys(doc["grid"], "/grid", {"T", "steps"});
    if (auto s = integer_at(doc["grid"], "steps", "/grid")) {
      steps = s;
      steps_ptr = "/grid/steps";
    }
    if (auto t = real_at(doc["grid"], "T", "/grid")) {
      T = t;
      t_ptr = "/grid/T";
    }
  }
  if (flags.steps) {
    steps = flags.steps;
    steps_ptr = "/grid/steps";
  }
  if (flags.T) {
    T = flags.T;
    t_ptr = "/grid/T";
  }
  if (steps && *steps < 1) throw ConfigError(steps_ptr, "steps must be >= 1");
  if (T && !(*T > 0.0 && std::isfinite(*T))) throw ConfigError(t_ptr, "T must be a positive number");
  cfg.grid = {T.value_or(kDefaultT), steps ? static_cast<std::size_t>(*steps) : kDefaultSteps};

  const bool has_scenario = doc.contains("scenario");
  const bool has_model = doc.contains("model");
  if (has_scenario == has_model) {
    throw ConfigError(has_model ? "/model" : "/scenario",
                      has_model ? "give either a scenario or a model, not both" : "a scenario or a model is required");
  }
  if (has_scenario) {
    const Json& s = doc["scenario"];
    if (!s.is_string() && !s.is_object()) throw ConfigError("/scenario", "expected a name or a descriptor");
    dephasing::DephasingScenario sc = scenario_from_json(s, "/scenario");
    sc.grid = cfg.grid;
    if (s.is_object()) {
      if (s.contains("g12")) check_schedule_horizon(sc.g12, cfg.grid.T, "/scenario/g12");
      if (s.contains("Bz")) check_schedule_horizon(sc.bz, cfg.grid.T, "/scenario/Bz");
    }
    cfg.scenario = sc;
    cfg.model = dephasing::build_collective_model(2, sc.g12, sc.bz, sc.gamma);
  } else {
    cfg.model = model_from_json(doc["model"], "/model", cfg.tol);
    const auto& m = *cfg.model;
    for (std::size_t i = 0; i < m.terms().size(); ++i) {
      check_schedule_horizon(m.terms()[i].coefficient, cfg.grid.T,
                             "/model/hamiltonian/" + std::to_string(i) + "/coefficient");
    }
    for (std::size_t a = 0; a < m.dissipators().size(); ++a) {
      const std::string p = "/model/dissipators/" + std::to_string(a) + "/rate";
      const auto& rate = m.dissipators()[a].rate;
      check_schedule_horizon(rate, cfg.grid.T, p);
      for (std::size_t k = 0; k <= cfg.grid.steps; ++k) {
        const double t = cfg.grid.time(k);
        if (rate.eval(t) < 0.0) throw ConfigError(p, "rate is negative at t = " + std::to_string(t));
      }
    }
  }
  const std::size_t n = cfg.model->dim();

  if (doc.contains("initial_state")) {
    const Operator rho = hermitian_matrix(doc["initial_state"], "/initial_state", n, cfg.tol.hermitian);
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-12) throw ConfigError("/initial_state", "trace must be 1");
    if (spectral_decompose(rho, cfg.tol).values.front() < -cfg.tol.psd) {
      throw ConfigError("/initial_state", "state is not positive semidefinite");
    }
    cfg.initial_state = rho;
  }
  if (doc.contains("initial_invariant")) {
    cfg.initial_invariant = hermitian_matrix(doc["initial_invariant"], "/initial_invariant", n, cfg.tol.hermitian);
  }
  if (doc.contains("observables")) {
    const Json& obs = doc["observables"];
    if (!obs.is_array()) throw ConfigError("/observables", "expected an array");
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const std::string p = "/observables/" + std::to_string(k);
      require_known_keys(obs[k], p, {"name", "op"});
      if (!obs[k].contains("name") || !obs[k]["name"].is_string()) throw ConfigError(p + "/name", "expected a string");
      const std::string name = obs[k]["name"].get<std::string>();
      if (name.empty() || name.find_first_of(",\n\"") != std::string::npos) {
        throw ConfigError(p + "/name", "name must be non-empty without commas, quotes or newlines");
      }
      if (!obs[k].contains("op")) throw ConfigError(p + "/op", "missing");
      cfg.observables.emplace_back(name, hermitian_matrix(obs[k]["op"], p + "/op", n, cfg.tol.hermitian));
    }
  }
  if (doc.contains("dfs")) {
    const Json& d = doc["dfs"];
    require_known_keys(d, "/dfs", {"tol", "time", "dfs_basis", "comp_basis"});
    if (auto t = real_at(d, "tol", "/dfs")) {
      if (!(*t > 0.0)) throw ConfigError("/dfs/tol", "must be > 0");
      cfg.dfs.tol = *t;
    }
    if (auto t = real_at(d, "time", "/dfs")) {
      if (*t < 0.0 || *t > cfg.grid.T) throw ConfigError("/dfs/time", "must lie in [0, T]");
      cfg.dfs.time = *t;
    }
    if (d.contains("dfs_basis")) cfg.dfs.dfs_basis = columns_from_json(d["dfs_basis"], "/dfs/dfs_basis", n);
    if (d.contains("comp_basis")) {
      if (!cfg.dfs.dfs_basis) throw ConfigError("/dfs/comp_basis", "requires /dfs/dfs_basis");
      cfg.dfs.comp_basis = columns_from_json(d["comp_basis"], "/dfs/comp_basis", n);
    }
  }
  if (doc.contains("blocks")) {
    const Json& b = doc["blocks"];
    require_known_keys(b, "/blocks", {"ID0", "IC0"});
    if (b.contains("ID0")) cfg.id0 = matrix_from_json(b["ID0"], "/blocks/ID0");
    if (b.contains("IC0")) cfg.ic0 = matrix_from_json(b["IC0"], "/blocks/IC0");
    if (cfg.id0 && !is_hermitian(*cfg.id0, cfg.tol.hermitian)) throw ConfigError("/blocks/ID0", "matrix is not Hermitian");
    if (cfg.ic0 && !is_hermitian(*cfg.ic0, cfg.tol.hermitian)) throw ConfigError("/blocks/IC0", "matrix is not Hermitian");
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    require_known_keys(o, "/output", {"path", "format", "full"});
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("/output/path", "expected a string");
      cfg.output.path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("/output/format", "expected a string");
      cfg.output.format = o["format"].get<std::string>();
    }
    if (o.contains("full")) {
      if (!o["full"].is_boolean()) throw ConfigError("/output/full", "expected a boolean");
      cfg.output.full = o["full"].get<bool>();
    }
  }
  if (flags.out) cfg.output.path = *flags.out;
  if (flags.format) cfg.output.format = *flags.format;
  if (flags.full) cfg.output.full = true;
  if (cfg.output.format != "csv" && cfg.output.format != "json") {
    throw ConfigError("/output/format", "expected 'csv' or 'json'");
  }
  return cfg;
}

}  // namespace qinv::cli
