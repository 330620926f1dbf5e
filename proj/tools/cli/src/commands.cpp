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

#include "qinv_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "qinv/block_invariants.hpp"
#include "qinv/errors.hpp"
#include "qinv_cli/log.hpp"

namespace qinv::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Verification bound(const std::string& name, const std::string& what, double measured, double limit) {
  const bool pass = measured <= limit;
  return {name, pass, what + " = " + sci(measured) + (pass ? " <= " : " > ") + sci(limit)};
}

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Json> row) { rows_.push_back(std::move(row)); }

  std::string csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + columns_[c];
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        const Json& v = row[c];
        if (v.is_number_float()) out += format_double(v.get<double>());
        else if (v.is_string()) out += v.get<std::string>();
        else out += v.dump();
      }
      out += '\n';
    }
    return out;
  }

  Json json() const {
    Json rows = Json::array();
    for (const auto& r : rows_) rows.push_back(r);
    return {{"columns", columns_}, {"rows", std::move(rows)}};
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Json>> rows_;
};

std::string render(const RunConfig& cfg, const Table& table, Json extra) {
  if (cfg.output.format == "csv") return table.csv();
  Json doc = table.json();
  doc["command"] = cfg.command;
  doc["grid"] = {{"T", cfg.grid.T}, {"steps", cfg.grid.steps}};
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  return dump_json(doc);
}

std::string render_report(const RunConfig& cfg, Json doc) {
  doc["command"] = cfg.command;
  doc["grid"] = {{"T", cfg.grid.T}, {"steps", cfg.grid.steps}};
  return dump_json(doc);
}

Operator default_state(std::size_t n) {
  const Vector psi = Vector::Constant(static_cast<Eigen::Index>(n), Complex(1.0 / std::sqrt(double(n)), 0.0));
  return psi * psi.adjoint();
}

Operator sigma_z_like(std::size_t d) {
  Operator m = Operator::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) m(Eigen::Index(k), Eigen::Index(k)) = (k % 2 == 0) ? 1.0 : -1.0;
  return m;
}

Operator sigma_x_like(std::size_t d) {
  Operator m = Operator::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  if (d == 1) m(0, 0) = 1.0;
  for (std::size_t k = 0; k + 1 < d; k += 2) {
    m(Eigen::Index(k), Eigen::Index(k + 1)) = 1.0;
    m(Eigen::Index(k + 1), Eigen::Index(k)) = 1.0;
  }
  return m;
}

struct NoDfs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double heff_residual(const RunConfig& cfg, const DfsDecomposition& d) {
  const LindbladModel& m = cfg.lindblad_model();
  const Operator heff = compute_Heff(m, d, Operator::Zero(Eigen::Index(m.dim()), Eigen::Index(m.dim())), cfg.dfs.time);
  return dfs_condition_residual(heff, d) / std::max(1.0, max_abs(heff));
}

DfsDecomposition resolve_decomposition(const RunConfig& cfg) {
  const LindbladModel& m = cfg.lindblad_model();
  Tolerances tol = cfg.tol;
  tol.dfs = std::max(tol.dfs, cfg.dfs.tol);
  if (cfg.dfs.dfs_basis) {
    const auto basis = [&](const Operator& cols, const char* pointer) {
      try {
        return SubspaceBasis(cols, cfg.tol.ortho);
      } catch (const InvalidInput& e) {
        throw ConfigError(pointer, e.what());
      }
    };
    const SubspaceBasis dfs = basis(*cfg.dfs.dfs_basis, "/dfs/dfs_basis");
    const SubspaceBasis comp =
        cfg.dfs.comp_basis ? basis(*cfg.dfs.comp_basis, "/dfs/comp_basis") : dfs.orthogonal_complement();
    if (dfs.ambient_dim() != m.dim() || dfs.size() + comp.size() != m.dim()) {
      throw ConfigError("/dfs", "DFS and complement bases must split the model dimension");
    }
    const auto n = static_cast<Eigen::Index>(m.dim());
    DfsDecomposition d = block_decompose(m, DfsDecomposition(dfs, comp, {}), Operator::Zero(n, n), cfg.dfs.time, tol);
    d.heff_residual = heff_residual(cfg, d);
    d.heff_invariant = d.heff_residual <= cfg.dfs.tol;
    return d;
  }
  if (cfg.scenario) return dephasing::build_two_qubit_model(*cfg.scenario).decomposition;
  for (auto& d : find_static_dfs(m, cfg.dfs.time, cfg.dfs.tol)) {
    if (d.is_dfs()) return d;
  }
  throw NoDfs("no decoherence-free subspace found");
}


std::pair<Operator, Operator> initial_blocks(const RunConfig& cfg, const DfsDecomposition& d) {
  Operator id = cfg.id0 ? *cfg.id0
                        : cfg.scenario ? dephasing::BlochCoefficients::from_reference(cfg.scenario->id0).to_operator()
                                       : sigma_z_like(d.dfs_dim());
  Operator ic = cfg.ic0 ? *cfg.ic0
                        : cfg.scenario ? dephasing::BlochCoefficients::from_reference(cfg.scenario->ic0).to_operator()
                                       : sigma_x_like(d.comp_dim());
  if (static_cast<std::size_t>(id.rows()) != d.dfs_dim()) {
    throw ConfigError("/blocks/ID0/dim", "expected the DFS dimension " + std::to_string(d.dfs_dim()));
  }
  if (static_cast<std::size_t>(ic.rows()) != d.comp_dim()) {
    throw ConfigError("/blocks/IC0/dim", "expected the complement dimension " + std::to_string(d.comp_dim()));
  }
  return {std::move(id), std::move(ic)};
}

Operator initial_invariant(const RunConfig& cfg) {
  if (cfg.initial_invariant) return *cfg.initial_invariant;
  if (cfg.scenario) {
    const auto d = resolve_decomposition(cfg);
    auto [id, ic] = initial_blocks(cfg, d);
    return assemble_invariant({id, ic, d});
  }
  const auto n = static_cast<Eigen::Index>(cfg.lindblad_model().dim());
  Operator m = Operator::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m(k, k) = double(k + 1);
  return m;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

CommandResult propagate_state_cmd(const RunConfig& cfg) {
  const LindbladModel& m = cfg.lindblad_model();
  const Operator rho0 = cfg.initial_state.value_or(default_state(m.dim()));
  const StateTrajectory tr = propagate_state(m, rho0, cfg.grid, cfg.tol);
  std::vector<std::string> cols{"t", "tr_re", "purity", "min_eig"};
  for (const auto& [name, op] : cfg.observables) cols.push_back(name);
  Table table(cols);
  double max_trace = 0.0, max_herm = 0.0, min_eig = std::numeric_limits<double>::infinity();
  Json states = Json::array();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Operator& rho = tr.states[k];
    std::vector<Json> row{tr.times[k], rho.trace().real(), (rho * rho).trace().real(),
                          tr.diagnostics[k].min_eigenvalue};
    for (const auto& [name, op] : cfg.observables) row.push_back((op * rho).trace().real());
    table.add(std::move(row));
    max_trace = std::max(max_trace, tr.diagnostics[k].trace_deviation);
    max_herm = std::max(max_herm, tr.diagnostics[k].hermitian_deviation);
    min_eig = std::min(min_eig, tr.diagnostics[k].min_eigenvalue);
    if (cfg.output.full) states.push_back(matrix_to_json(rho));
  }
  Json extra{{"diagnostics",
              {{"max_trace_deviation", max_trace}, {"max_hermitian_deviation", max_herm}, {"min_eigenvalue", min_eig}}}};
  if (cfg.output.full) extra["states"] = std::move(states);
  return {{bound("trace-conservation", "max |Tr rho - 1|", max_trace, cfg.tol.trace)}, render(cfg, table, extra)};
}

CommandResult propagate_invariant_cmd(const RunConfig& cfg) {
  const LindbladModel& m = cfg.lindblad_model();
  const InvariantTrajectory tr = propagate_invariant(m, initial_invariant(cfg), cfg.grid, cfg.tol);
  std::vector<std::string> cols{"t", "tr_re"};
  for (auto& c : numbered("lambda_", m.dim())) cols.push_back(c);
  Table table(cols);
  Json ops = Json::array();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::vector<Json> row{tr.times()[k], tr.at(k).trace().real()};
    for (double v : tr.eigensystems()[k].values) row.push_back(v);
    table.add(std::move(row));
    if (cfg.output.full) ops.push_back(matrix_to_json(tr.at(k)));
  }
  Json extra = Json::object();
  if (cfg.output.full) extra["invariants"] = std::move(ops);
  return {{}, render(cfg, table, extra)};
}

CommandResult verify_invariant_cmd(const RunConfig& cfg) {
  const LindbladModel& m = cfg.lindblad_model();
  const Operator i0 = initial_invariant(cfg);
  const InvariantTrajectory coarse = propagate_invariant(m, i0, cfg.grid, cfg.tol);
  const InvariantTrajectory fine = propagate_invariant(m, i0, {cfg.grid.T, 2 * cfg.grid.steps}, cfg.tol);
  if (coarse.size() < 3) throw ConfigError("/grid/steps", "verify-invariant needs at least 2 steps");
  const auto rc = invariant_residual(m, coarse);
  const auto rf = invariant_residual(m, fine);
  const double r1 = *std::max_element(rc.begin(), rc.end());
  const double r2 = *std::max_element(rf.begin(), rf.end());
  constexpr double kFloor = 1e-10;
  const double order = (r1 > 0.0 && r2 > 0.0) ? std::log2(r1 / r2) : 0.0;
  const bool at_floor = r1 <= kFloor;
  const StateTrajectory states =
      propagate_state(m, cfg.initial_state.value_or(default_state(m.dim())), cfg.grid, cfg.tol);
  const double defect = expectation_series(coarse, states).defect;

  std::vector<Verification> v;
  Verification ord{"residual-order", at_floor || order >= cfg.thresholds.min_order,
                   "order estimate " + sci(order) + " (max residual " + sci(r1) + ", refined " + sci(r2) + ")"};
  v.push_back(ord);
  v.push_back(bound("expectation-constancy", "max |<I>(t) - <I>(0)|", defect, cfg.thresholds.expectation));
  const bool pass = v[0].pass && v[1].pass;
  Json residuals = Json::array();
  for (double r : rc) residuals.push_back(r);
  Json doc{{"max_residual", r1},         {"max_residual_refined", r2}, {"order_estimate", order},
           {"expectation_defect", defect}, {"pass", pass},             {"residuals", std::move(residuals)}};
  return {v, render_report(cfg, std::move(doc))};
}

CommandResult find_dfs_cmd(const RunConfig& cfg) {
  const auto all = find_static_dfs(cfg.lindblad_model(), cfg.dfs.time, cfg.dfs.tol);
  Json dfs = Json::array(), others = Json::array();
  for (const auto& d : all) (d.is_dfs() ? dfs : others).push_back(decomposition_to_json(d));
  const std::size_t found = dfs.size();
  Json doc{{"time", cfg.dfs.time}, {"tol", cfg.dfs.tol}, {"dfs", std::move(dfs)}, {"other_candidates", std::move(others)}};
  Verification v{"dfs-found", found > 0,
                 std::to_string(found) + " decoherence-free subspace(s) among " + std::to_string(all.size()) +
                     " common-eigenspace candidate(s)"};
  return {{v}, render_report(cfg, std::move(doc))};
}

CommandResult block_decompose_cmd(const RunConfig& cfg) {
  DfsDecomposition d = resolve_decomposition(cfg);
  const double residual = heff_residual(cfg, d);
  d.heff_residual = residual;
  d.heff_invariant = residual <= cfg.dfs.tol;
  Json doc = decomposition_to_json(d);
  doc["dfs_condition_residual"] = residual;
  return {{bound("dfs-condition", "max |<comp| H_eff |dfs>| / scale", residual, cfg.dfs.tol)},
          render_report(cfg, std::move(doc))};
}

struct BlockRun {
  DfsDecomposition decomposition;
  BlockSchedule schedule;
  InvariantTrajectory id;
  InvariantTrajectory ic;
};

BlockRun run_blocks(const RunConfig& cfg) {
  DfsDecomposition d = resolve_decomposition(cfg);
  BlockSchedule sched = static_block_schedule(cfg.lindblad_model(), d, cfg.tol);
  auto [id0, ic0] = initial_blocks(cfg, d);
  InvariantTrajectory id = propagate_ID(sched, id0, cfg.grid, cfg.tol);
  InvariantTrajectory ic = propagate_IC(sched, id, ic0, cfg.grid, cfg.tol);
  return {std::move(d), std::move(sched), std::move(id), std::move(ic)};
}

CommandResult propagate_blocks_cmd(const RunConfig& cfg) {
  const BlockRun br = run_blocks(cfg);
  const InvariantTrajectory full = assemble_trajectory(br.decomposition, br.id, br.ic, cfg.tol);
  const FullInvariantReport rep = verify_full_invariant(cfg.lindblad_model(), br.decomposition, full, cfg.tol);
  std::vector<std::string> cols{"t", "tr_D", "tr_C"};
  for (auto& c : numbered("lambda_D_", br.decomposition.dfs_dim())) cols.push_back(c);
  for (auto& c : numbered("lambda_C_", br.decomposition.comp_dim())) cols.push_back(c);
  cols.push_back("offdiag_direct");
  Table table(cols);
  double drift = 0.0;
  const auto& v0 = br.id.eigensystems().front().values;
  Json ids = Json::array(), ics = Json::array();
  for (std::size_t k = 0; k < br.id.size(); ++k) {
    std::vector<Json> row{br.id.times()[k], br.id.at(k).trace().real(), br.ic.at(k).trace().real()};
    const auto& vd = br.id.eigensystems()[k].values;
    for (std::size_t j = 0; j < vd.size(); ++j) {
      row.push_back(vd[j]);
      drift = std::max(drift, std::abs(vd[j] - v0[j]));
    }
    for (double v : br.ic.eigensystems()[k].values) row.push_back(v);
    row.push_back(rep.direct_offdiag[k]);
    table.add(std::move(row));
    if (cfg.output.full) {
      ids.push_back(matrix_to_json(br.id.at(k)));
      ics.push_back(matrix_to_json(br.ic.at(k)));
    }
  }
  Json extra{{"max_residual", rep.max_residual}, {"max_direct_offdiag", rep.max_direct_offdiag}};
  if (cfg.output.full) {
    extra["ID"] = std::move(ids);
    extra["IC"] = std::move(ics);
  }
  return {{bound("full-invariant-condition", "max residual", rep.max_residual, cfg.thresholds.residual),
           bound("decoupling-persistence", "max off-diagonal block norm", rep.max_direct_offdiag,
                 cfg.thresholds.offdiag),
           bound("dfs-spectrum", "max |lambda_D(t) - lambda_D(0)|", drift, cfg.thresholds.spectrum)},
          render(cfg, table, extra)};
}

CommandResult eigenflow_cmd(const RunConfig& cfg) {
  const LindbladModel& m = cfg.lindblad_model();
  const InvariantTrajectory tr = propagate_invariant(m, initial_invariant(cfg), cfg.grid, cfg.tol);
  Table table({"block", "t", "index", "lambda", "rhs", "fd", "defect", "degenerate"});
  std::vector<Verification> v;
  const auto emit = [&](const std::string& block, const std::vector<EigenFlowRecord>& recs) {
    double worst = 0.0;
    std::size_t degenerate = 0;
    for (const auto& r : recs) {
      table.add({block, r.time, static_cast<long long>(r.index), r.lambda, r.rhs, r.fd, r.defect,
                 static_cast<long long>(r.degenerate ? 1 : 0)});
      if (r.degenerate) ++degenerate;
      else worst = std::max(worst, r.defect);
    }
    Verification ver = bound("eigenflow-" + block, "max |rhs - fd|", worst, cfg.thresholds.eigenflow);
    if (degenerate > 0) ver.detail += " (" + std::to_string(degenerate) + " degenerate records excluded)";
    v.push_back(ver);
  };
  emit("full", eigenflow(m, tr, cfg.tol));
  try {
    const BlockRun br = run_blocks(cfg);
    emit("complement", complement_eigenflow(br.schedule, br.id, br.ic, cfg.tol));
  } catch (const NoDfs&) {
    log(LogLevel::kInfo, "eigenflow: model has no DFS; complement flow skipped");
  }
  return {v, render(cfg, table, Json::object())};
}

CommandResult example_dephasing_cmd(const RunConfig& cfg) {
  if (!cfg.scenario) throw ConfigError("/scenario", "example-dephasing needs a dephasing scenario");
  const auto rep = dephasing::compare_analytic_numeric(*cfg.scenario);
  Table table({"t", "xD", "yD", "zD", "xD_exact", "yD_exact", "zD_exact", "xC", "yC", "zC", "xC_exact", "yC_exact",
               "zC_exact"});
  for (const auto& s : rep.samples) {
    table.add({s.t, s.id_numeric.x, s.id_numeric.y, s.id_numeric.z, s.id_analytic.x, s.id_analytic.y,
               s.id_analytic.z, s.ic_numeric.x, s.ic_numeric.y, s.ic_numeric.z, s.ic_analytic.x, s.ic_analytic.y,
               s.ic_analytic.z});
  }
  const auto& th = cfg.thresholds;
  std::vector<Verification> v{
      bound("ID-analytic", "max component deviation", rep.id_max_deviation, th.analytic),
      bound("IC-analytic", "max relative component deviation", rep.ic_max_relative_deviation, th.analytic),
      bound("ID-spectrum", "max |lambda_D - (+-|ID0|)|", rep.id_eigenvalue_deviation, th.spectrum),
      bound("IC-eigenvalues", "max relative eigenvalue deviation", rep.ic_eigenvalue_relative_deviation, th.analytic),
      bound("zC-conservation", "max |zC(t) - zC(0)|", rep.zc_drift, th.zc_drift)};
  const auto& ic0 = cfg.scenario->ic0;
  if (cfg.scenario->gamma > 0.0 && std::hypot(ic0.x, ic0.y) > 0.0) {
    const double rel = std::abs(rep.fitted_growth_rate - rep.expected_growth_rate) / rep.expected_growth_rate;
    v.push_back(bound("IC-growth-rate", "relative deviation of fitted rate " + sci(rep.fitted_growth_rate) +
                                            " from 8 gamma",
                      rel, th.growth_relative));
  }
  Json extra{{"id_max_deviation", rep.id_max_deviation},
             {"ic_max_deviation", rep.ic_max_deviation},
             {"ic_max_relative_deviation", rep.ic_max_relative_deviation},
             {"id_eigenvalue_deviation", rep.id_eigenvalue_deviation},
             {"ic_eigenvalue_relative_deviation", rep.ic_eigenvalue_relative_deviation},
             {"ic_eigenvalue_drift", rep.ic_eigenvalue_drift},
             {"zc_drift", rep.zc_drift},
             {"fitted_growth_rate", rep.fitted_growth_rate},
             {"expected_growth_rate", rep.expected_growth_rate},
             {"convention", "reference (z of the library Pauli basis negated)"}};
  return {v, render(cfg, table, extra)};
}

const std::map<std::string, std::function<CommandResult(const RunConfig&)>>& dispatch() {
  static const std::map<std::string, std::function<CommandResult(const RunConfig&)>> table{
      {"propagate-state", propagate_state_cmd},   {"propagate-invariant", propagate_invariant_cmd},
      {"verify-invariant", verify_invariant_cmd}, {"find-dfs", find_dfs_cmd},
      {"block-decompose", block_decompose_cmd},   {"propagate-blocks", propagate_blocks_cmd},
      {"eigenflow", eigenflow_cmd},               {"example-dephasing", example_dephasing_cmd}};
  return table;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"propagate-state",  "propagate-invariant", "verify-invariant",
                                              "find-dfs",         "block-decompose",     "propagate-blocks",
                                              "eigenflow",        "example-dephasing"};
  return names;
}

CommandResult execute(const RunConfig& cfg) {
  const auto it = dispatch().find(cfg.command);
  if (it == dispatch().end()) throw ConfigError("", "unknown subcommand '" + cfg.command + "'");
  log(LogLevel::kInfo, cfg.command + ": T = " + sci(cfg.grid.T) + ", steps = " + std::to_string(cfg.grid.steps));
  try {
    return it->second(cfg);
  } catch (const IntegrationError& e) {
    return {{{cfg.command, false, e.what()}}, ""};
  } catch (const NotADfs& e) {
    return {{{cfg.command, false, e.what()}}, ""};
  } catch (const NoDfs& e) {
    return {{{cfg.command, false, e.what()}}, ""};
  } catch (const SingularSchedule& e) {
    return {{{cfg.command, false, e.what()}}, ""};
  } catch (const UnsupportedModel& e) {
    return {{{cfg.command, false, e.what()}}, ""};
  }
}

int run(const RunConfig& cfg, std::ostream& data, std::ostream& report) {
  const CommandResult res = execute(cfg);
  bool all_pass = true;
  for (const auto& v : res.verifications) all_pass = all_pass && v.pass;
  if (!res.artifact.empty()) {
    if (cfg.output.path.empty()) {
      data << res.artifact;
    } else {
      write_atomic(cfg.output.path, res.artifact);
      log(LogLevel::kInfo, "wrote " + cfg.output.path);
    }
  }
  for (const auto& v : res.verifications) {
    report << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << '\n';
  }
  return all_pass ? kExitPass : kExitVerificationFailed;
}

}  // namespace qinv::cli
