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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Measured values are printed next to their bounds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qinv/block_invariants.hpp"
#include "qinv/dephasing.hpp"
#include "qinv/dfs.hpp"
#include "qinv/lindblad.hpp"
#include "qinv/pauli.hpp"

namespace {

using namespace qinv;
using dephasing::BlochCoefficients;
using dephasing::DephasingScenario;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string le(double measured, double bound) {
  return sci(measured) + (measured <= bound ? " <= " : " > ") + sci(bound);
}

Operator embed(const Operator& id, const Operator& ic, const DfsDecomposition& d) {
  return assemble_invariant({id, ic, d});
}

DephasingScenario scenario(double gamma, double T, std::size_t steps) {
  DephasingScenario s = DephasingScenario::demo();
  s.gamma = gamma;
  s.grid = {T, steps};
  s.id0 = {0.3, -0.4, 0.8};
  s.ic0 = {0.6, -0.3, 0.5};
  return s;
}

Outcome invariance_theorem() {
  Outcome out;
  const auto tq = dephasing::build_two_qubit_model(scenario(0.05, 2.0, 8000));
  const TimeGrid grid{2.0, 8000};
  testing::Rng rng(20261016);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Operator i0 = rng.hermitian(4);
    const Operator rho0 = rng.density(4);
    const auto inv = propagate_invariant(tq.model, i0, grid);
    const auto st = propagate_state(tq.model, rho0, grid);
    worst = std::max(worst, expectation_series(inv, st).defect);
  }
  out.check(worst <= 1e-6, "max |<I>(t) - <I>(0)| over 20 pairs = " + le(worst, 1e-6));
  return out;
}

Outcome closed_reduction() {
  Outcome out;
  const LindbladModel closed = dephasing::build_two_qubit_model(scenario(0.05, 2.0, 4000)).model.closed();
  testing::Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto tr = propagate_invariant(closed, rng.hermitian(4), {2.0, 4000});
    const auto& v0 = tr.eigensystems().front().values;
    for (const auto& es : tr.eigensystems()) {
      for (std::size_t j = 0; j < v0.size(); ++j) worst = std::max(worst, std::abs(es.values[j] - v0[j]));
    }
  }
  out.check(worst <= 1e-9, "max spectrum drift over 10 invariants = " + le(worst, 1e-9));
  return out;
}

Outcome dfs_detection() {
  Outcome out;
  const auto tq = dephasing::build_two_qubit_model(scenario(0.05, 2.0, 100));
  const auto all = find_static_dfs(tq.model, 0.0, 1e-9);
  std::vector<const DfsDecomposition*> dfs;
  std::size_t heff = 0;
  for (const auto& d : all) {
    if (d.heff_invariant) ++heff;
    if (d.is_dfs()) dfs.push_back(&d);
  }
  out.check(dfs.size() == 1, std::to_string(dfs.size()) + " DFS (D >= 2, H_eff invariant) among " +
                                 std::to_string(all.size()) + " candidates, " + std::to_string(heff) +
                                 " H_eff invariant");
  if (dfs.size() != 1) return out;
  Operator target = Operator::Zero(4, 4);
  target(1, 1) = 1.0;
  target(2, 2) = 1.0;
  const double proj = max_abs(Operator(dfs[0]->dfs_basis().projector() - target));
  out.check(proj <= 1e-9, "projector error " + le(proj, 1e-9));
  const double c = std::abs(dfs[0]->common_eigenvalues().at(0));
  out.check(c <= 1e-10, "|c| = " + le(c, 1e-10));
  return out;
}

Outcome block_data() {
  Outcome out;
  const double g = 0.7, bz = 1.3;
  DephasingScenario s = scenario(0.05, 2.0, 100);
  s.g12 = CoefficientSchedule::constant(g);
  s.bz = CoefficientSchedule::constant(bz);
  const auto tq = dephasing::build_two_qubit_model(s);
  const DfsDecomposition d = block_decompose(tq.model, tq.decomposition, Operator::Zero(4, 4), 0.9);
  const BlockData& b = *d.blocks();
  Operator hd(2, 2), hc = Operator::Zero(2, 2), bb = Operator::Zero(2, 2);
  hd << 0.0, g, g, 0.0;
  hc(0, 0) = -bz;
  hc(1, 1) = bz;
  bb(0, 0) = -2.0;
  bb(1, 1) = 2.0;
  const auto& lb = b.lindblad.at(0);
  const double err = std::max({std::abs(lb.c), max_abs(lb.a), max_abs(Operator(lb.b - bb)),
                               max_abs(Operator(b.h.d - hd)), max_abs(b.h.n), max_abs(Operator(b.h.c - hc))});
  out.check(err <= 1e-12, "max block error (c, A, B, H^D, H^N, H^C) = " + le(err, 1e-12));
  return out;
}

Outcome id_solution() {
  Outcome out;
  for (const bool driven : {false, true}) {
    DephasingScenario s = scenario(0.05, 2.0, 8000);
    if (driven) s.g12 = CoefficientSchedule::sinusoid(0.4, 3.0, 0.2, 1.0);
    const auto rep = dephasing::compare_analytic_numeric(s);
    const std::string tag = driven ? "sinusoid g: " : "constant g: ";
    out.check(rep.id_max_deviation <= 1e-6, tag + "component deviation " + le(rep.id_max_deviation, 1e-6));
    out.check(rep.id_eigenvalue_deviation <= 1e-8,
              tag + "eigenvalue deviation " + le(rep.id_eigenvalue_deviation, 1e-8));
  }
  return out;
}

Outcome ic_solution() {
  Outcome out;
  const auto rep = dephasing::compare_analytic_numeric(scenario(0.1, 1.0, 8000));
  out.check(rep.ic_max_relative_deviation <= 1e-5, "relative deviation " + le(rep.ic_max_relative_deviation, 1e-5));
  const double rate = std::abs(rep.fitted_growth_rate - 0.8) / 0.8;
  out.check(rate <= 0.01, "growth rate " + sci(rep.fitted_growth_rate) + " vs 8 gamma, relative " + le(rate, 0.01));
  out.check(rep.ic_eigenvalue_relative_deviation <= 1e-5,
            "eigenvalue law " + le(rep.ic_eigenvalue_relative_deviation, 1e-5));
  out.check(rep.zc_drift <= 1e-9, "z^C drift " + le(rep.zc_drift, 1e-9));
  return out;
}

Outcome eigenvalue_flow() {
  Outcome out;
  const DephasingScenario s = scenario(0.05, 1.0, 8000);
  const auto tq = dephasing::build_two_qubit_model(s);
  const TimeGrid grid{1.0, 8000};
  const Operator id0 = BlochCoefficients::from_reference(s.id0).to_operator();
  const Operator ic0 = BlochCoefficients::from_reference(s.ic0).to_operator();

  const auto full = propagate_invariant(tq.model, embed(id0, ic0, tq.decomposition), grid);
  const auto recs = eigenflow(tq.model, full);
  const Operator p = tq.decomposition.dfs_basis().projector();
  double worst = 0.0, dfs_rate = 0.0;
  std::size_t dfs_records = 0;
  for (const auto& r : recs) {
    if (!r.degenerate) worst = std::max(worst, r.defect);
    const auto k = static_cast<std::size_t>(std::lround(r.time / grid.dt()));
    const Vector v = full.eigensystems().at(k).vector(r.index);
    if ((p * v).squaredNorm() >= 1.0 - 1e-6) {
      ++dfs_records;
      dfs_rate = std::max({dfs_rate, std::abs(r.fd), std::abs(r.rhs)});
    }
  }
  out.check(worst <= 1e-5, "full |rhs - fd| " + le(worst, 1e-5));

  const BlockSchedule sched = static_block_schedule(tq.model, tq.decomposition);
  const auto id = propagate_ID(sched, id0, grid);
  const auto ic = propagate_IC(sched, id, ic0, grid);
  double worst_c = 0.0;
  for (const auto& r : complement_eigenflow(sched, id, ic)) {
    if (!r.degenerate) worst_c = std::max(worst_c, r.defect);
  }
  out.check(worst_c <= 1e-5, "complement |rhs - fd| " + le(worst_c, 1e-5));
  out.check(dfs_records > 0 && dfs_rate <= 1e-8,
            "DFS eigenstates (" + std::to_string(dfs_records) + " records) |dlambda/dt| " + le(dfs_rate, 1e-8));
  return out;
}

Outcome decoupling() {
  Outcome out;
  const auto tq = dephasing::build_two_qubit_model(scenario(0.05, 2.0, 8000));
  testing::Rng rng(4242);
  const Operator i0 = embed(rng.hermitian(2), rng.hermitian(2), tq.decomposition);
  const TimeGrid grid{2.0, 8000};

  const auto direct = propagate_invariant(tq.model, i0, grid);
  double worst = 0.0;
  for (const auto& x : direct.invariants()) worst = std::max(worst, offdiagonal_block_norm(tq.decomposition, x));
  out.check(worst <= 1e-7, "uncoupled off-diagonal norm " + le(worst, 1e-7));

  std::vector<HamiltonianTerm> terms = tq.model.terms();
  Operator coupling = Operator::Zero(4, 4);
  coupling(1, 0) = 1.0;  // |01><00| + h.c.
  coupling(0, 1) = 1.0;
  terms.push_back({coupling, CoefficientSchedule::constant(0.1)});
  const LindbladModel leaky(4, terms, tq.model.dissipators());
  const auto coupled = propagate_invariant(leaky, i0, grid);
  const double at_one = offdiagonal_block_norm(tq.decomposition, coupled.at(4000));
  out.check(at_one > 1e-3, "with 0.1 coupling, off-diagonal norm at t = 1 is " + sci(at_one) + " (> 1e-03)");
  return out;
}

Outcome riccati() {
  Outcome out;
  const std::vector<std::pair<std::string, CoefficientSchedule>> cases{
      {"constant", CoefficientSchedule::constant(0.9)},
      {"polynomial", CoefficientSchedule::polynomial({0.5, 0.3})},
      {"sinusoid", CoefficientSchedule::sinusoid(0.3, 2.0, 0.0, 1.0)}};
  const TimeGrid grid{2.0, 20000};
  const double z0 = 0.6, zdot0 = -0.7;
  for (const auto& [name, g] : cases) {
    const auto sol = dephasing::riccati_solve_second_order(g, z0, zdot0, grid);
    const auto res = dephasing::second_order_residual(g, sol.z);
    double zmax = 0.0;
    for (double v : sol.z.values) zmax = std::max(zmax, std::abs(v));
    const double r = *std::max_element(res.begin(), res.end());
    out.check(r <= 1e-7 * zmax, name + " residual " + le(r, 1e-7 * zmax));

    // y' = 2 g z, z' = -2 g y with y = -z'/(2 g).
    const auto rk = testing::rk4_real(
        [&g](double t, const std::vector<double>& y) {
          const double gt = g.eval(t);
          return std::vector<double>{2.0 * gt * y[1], -2.0 * gt * y[0]};
        },
        {-zdot0 / (2.0 * g.eval(0.0)), z0}, grid.T, static_cast<int>(grid.steps));
    double dev = 0.0;
    for (std::size_t k = 0; k < rk.size(); ++k) dev = std::max(dev, std::abs(rk[k][1] - sol.z.values[k]));
    out.check(dev <= 1e-7, name + " vs RK4 " + le(dev, 1e-7));
  }
  return out;
}

Outcome convergence_order() {
  Outcome out;
  const std::vector<std::size_t> steps{25, 50, 100, 200, 400};
  const auto study = [&](const std::string& name, double gamma, double T,
                         const std::function<double(const dephasing::DephasingReport&)>& metric) {
    std::vector<double> dev;
    for (std::size_t n : steps) dev.push_back(metric(dephasing::compare_analytic_numeric(scenario(gamma, T, n))));
    std::string line = name + " deviations";
    std::size_t above_floor = 0;
    bool ok = true;
    for (std::size_t k = 0; k + 1 < dev.size(); ++k) {
      const double ratio = dev[k] / dev[k + 1];
      line += " " + sci(dev[k]) + (k + 2 == dev.size() ? " " + sci(dev[k + 1]) : "");
      if (dev[k + 1] <= 1e-10) continue;
      ++above_floor;
      ok = ok && ratio >= 8.0;
    }
    double min_ratio = INFINITY;
    for (std::size_t k = 0; k + 1 < dev.size(); ++k) {
      if (dev[k + 1] > 1e-10) min_ratio = std::min(min_ratio, dev[k] / dev[k + 1]);
    }
    out.check(ok && above_floor >= 2, line + ", min ratio above floor " + sci(min_ratio) + " (>= 8)");
  };
  study("I^D", 0.05, 2.0, [](const auto& r) { return r.id_max_deviation; });
  study("I^C", 0.1, 1.0, [](const auto& r) { return r.ic_max_relative_deviation; });
  return out;
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
  double budget_s;  // 0: no runtime bound
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "invariance theorem", invariance_theorem, 5.0},
      {2, "closed-system reduction", closed_reduction, 2.0},
      {3, "DFS detection", dfs_detection, 0.0},
      {4, "block data", block_data, 0.0},
      {5, "I^D closed form", id_solution, 0.0},
      {6, "I^C closed form and growth law", ic_solution, 0.0},
      {7, "eigenvalue-flow laws", eigenvalue_flow, 0.0},
      {8, "decoupling", decoupling, 0.0},
      {9, "second-order equation via Riccati", riccati, 0.0},
      {10, "convergence order", convergence_order, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) o.check(secs < c.budget_s, "runtime " + sci(secs) + " s (< " + sci(c.budget_s) + " s)");
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
