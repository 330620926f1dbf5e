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

#include "qinv/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qinv/errors.hpp"

namespace qinv {

namespace {

// Precomputed per-dissipator pieces for the inner integration loop.
struct DissipatorCache {
  Operator f;
  Operator f_dag;
  Operator f_dag_f;
};

std::vector<DissipatorCache> cache_dissipators(const LindbladModel& m) {
  std::vector<DissipatorCache> out;
  out.reserve(m.dissipators().size());
  for (const auto& d : m.dissipators()) {
    out.push_back({d.op, d.op.adjoint(), d.op.adjoint() * d.op});
  }
  return out;
}

// K = H -+ (i/2) sum_a r_a F_a^dag F_a folds the anticommutators into one
// non-Hermitian product pair: sign -1 for states, +1 for invariants.
Operator effective_hamiltonian(const LindbladModel& m, const std::vector<DissipatorCache>& cache, double t,
                               double sign) {
  Operator k = m.hamiltonian(t);
  for (std::size_t a = 0; a < cache.size(); ++a) {
    const double r = m.rate(a, t);
    if (r != 0.0) k += (sign * 0.5 * r) * kI * cache[a].f_dag_f;
  }
  return k;
}

Operator liouvillian(const LindbladModel& m, const std::vector<DissipatorCache>& cache,
                     const Operator& rho, double t) {
  const Operator k = effective_hamiltonian(m, cache, t, -1.0);
  Operator out = -kI * (k.lazyProduct(rho) - rho.lazyProduct(k.adjoint()));
  for (std::size_t a = 0; a < cache.size(); ++a) {
    const double r = m.rate(a, t);
    if (r == 0.0) continue;
    out += r * cache[a].f.lazyProduct(rho).eval().lazyProduct(cache[a].f_dag);
  }
  return out;
}

Operator adjoint(const LindbladModel& m, const std::vector<DissipatorCache>& cache,
                 const Operator& inv, double t) {
  const Operator k = effective_hamiltonian(m, cache, t, 1.0);
  Operator out = -kI * (k.lazyProduct(inv) - inv.lazyProduct(k.adjoint()));
  for (std::size_t a = 0; a < cache.size(); ++a) {
    const double r = m.rate(a, t);
    if (r == 0.0) continue;
    out -= r * cache[a].f_dag.lazyProduct(inv).eval().lazyProduct(cache[a].f);
  }
  return out;
}

double min_eigenvalue(const Operator& herm) {
  Eigen::SelfAdjointEigenSolver<Operator> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

void require_dim(const LindbladModel& m, const Operator& op, const char* what) {
  require_square(op, what);
  if (static_cast<std::size_t>(op.rows()) != m.dim()) {
    throw InvalidInput(std::string(what) + ": dimension " + std::to_string(op.rows()) +
                       " does not match model dimension " + std::to_string(m.dim()));
  }
}

}  // namespace

LindbladModel::LindbladModel(std::size_t dim, std::vector<HamiltonianTerm> terms,
                             std::vector<Dissipator> dissipators, const Tolerances& tol)
    : dim_(dim), terms_(std::move(terms)), dissipators_(std::move(dissipators)) {
  if (dim_ == 0) throw InvalidInput("LindbladModel: dimension must be positive");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& op = terms_[i].op;
    if (static_cast<std::size_t>(op.rows()) != dim_ || op.rows() != op.cols()) {
      throw InvalidInput("LindbladModel: Hamiltonian term " + std::to_string(i) +
                         " has the wrong dimension");
    }
    if (!is_hermitian(op, tol.hermitian)) {
      throw InvalidInput("LindbladModel: Hamiltonian term " + std::to_string(i) +
                         " is not Hermitian");
    }
  }
  for (std::size_t a = 0; a < dissipators_.size(); ++a) {
    const auto& op = dissipators_[a].op;
    if (static_cast<std::size_t>(op.rows()) != dim_ || op.rows() != op.cols()) {
      throw InvalidInput("LindbladModel: Lindblad operator " + std::to_string(a) +
                         " has the wrong dimension");
    }
  }
}

Operator LindbladModel::hamiltonian(double t) const {
  Operator h = Operator::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (const auto& term : terms_) h += term.coefficient.eval(t) * term.op;
  return h;
}

double LindbladModel::rate(std::size_t a, double t) const {
  const double r = dissipators_.at(a).rate.eval(t);
  if (r < 0.0) {
    throw InvalidInput("LindbladModel: rate of Lindblad operator " + std::to_string(a) +
                       " is negative at t = " + std::to_string(t));
  }
  return r;
}

Operator LindbladModel::lindblad_operator(std::size_t a, double t) const {
  return std::sqrt(rate(a, t)) * dissipators_.at(a).op;
}

LindbladModel LindbladModel::closed() const {
  return LindbladModel(dim_, terms_, {});
}

Operator apply_liouvillian(const LindbladModel& m, const Operator& rho, double t) {
  require_dim(m, rho, "apply_liouvillian");
  return liouvillian(m, cache_dissipators(m), rho, t);
}

Operator apply_adjoint_generator(const LindbladModel& m, const Operator& invariant, double t,
                                 const Tolerances& tol) {
  require_dim(m, invariant, "apply_adjoint_generator");
  if (!is_hermitian(invariant, tol.hermitian)) {
    throw InvalidInput("apply_adjoint_generator: invariant is not Hermitian");
  }
  return adjoint(m, cache_dissipators(m), invariant, t);
}

StateTrajectory propagate_state(const LindbladModel& m, const Operator& rho0, const TimeGrid& grid,
                                const Tolerances& tol) {
  require_dim(m, rho0, "propagate_state");
  grid.validate();
  if (!is_hermitian(rho0, tol.hermitian)) {
    throw InvalidInput("propagate_state: initial state is not Hermitian");
  }
  if (std::abs(rho0.trace() - Complex(1.0)) > 1e-12) {
    throw InvalidInput("propagate_state: initial state must have unit trace");
  }
  if (min_eigenvalue(symmetrize(rho0)) < -tol.psd) {
    throw InvalidInput("propagate_state: initial state is not positive semidefinite");
  }

  const auto cache = cache_dissipators(m);
  const auto rhs = [&](double t, const Operator& rho) { return liouvillian(m, cache, rho, t); };
  const double h = grid.dt();

  StateTrajectory out;
  out.times.reserve(grid.steps + 1);
  out.states.reserve(grid.steps + 1);
  out.diagnostics.reserve(grid.steps + 1);

  Operator rho = symmetrize(rho0);
  out.times.push_back(0.0);
  out.diagnostics.push_back({std::abs(rho.trace() - Complex(1.0)), hermitian_deviation(rho0),
                             min_eigenvalue(rho)});
  out.states.push_back(rho);

  for (std::size_t k = 1; k <= grid.steps; ++k) {
    const Operator next = rk4_step<Operator>(rhs, grid.time(k - 1), rho, h);
    StepDiagnostics diag;
    diag.hermitian_deviation = hermitian_deviation(next);
    rho = symmetrize(next);
    diag.trace_deviation = std::abs(rho.trace() - Complex(1.0));
    diag.min_eigenvalue = min_eigenvalue(rho);
    if (diag.trace_deviation > tol.trace) {
      throw IntegrationError("propagate_state: trace drifted by " +
                                 std::to_string(diag.trace_deviation),
                             k);
    }
    if (diag.min_eigenvalue < -tol.psd) {
      throw IntegrationError("propagate_state: state lost positivity (min eigenvalue " +
                                 std::to_string(diag.min_eigenvalue) + ")",
                             k);
    }
    out.times.push_back(grid.time(k));
    out.states.push_back(rho);
    out.diagnostics.push_back(diag);
  }
  return out;
}

InvariantTrajectory propagate_invariant(const LindbladModel& m, const Operator& invariant0,
                                        const TimeGrid& grid, const Tolerances& tol) {
  require_dim(m, invariant0, "propagate_invariant");
  grid.validate();
  if (!is_hermitian(invariant0, tol.hermitian)) {
    throw InvalidInput("propagate_invariant: initial invariant is not Hermitian");
  }

  const auto cache = cache_dissipators(m);
  const auto rhs = [&](double t, const Operator& inv) { return adjoint(m, cache, inv, t); };
  const double h = grid.dt();

  std::vector<Operator> samples;
  samples.reserve(grid.steps + 1);
  Operator inv = symmetrize(invariant0);
  samples.push_back(inv);
  for (std::size_t k = 1; k <= grid.steps; ++k) {
    const Operator next = rk4_step<Operator>(rhs, grid.time(k - 1), inv, h);
    const double drift = hermitian_deviation(next);
    if (drift > 1e-9 * std::max(1.0, max_abs(next))) {
      throw IntegrationError("propagate_invariant: Hermiticity drifted by " + std::to_string(drift),
                             k);
    }
    inv = symmetrize(next);
    samples.push_back(inv);
  }
  return InvariantTrajectory::from_samples(grid.times(), std::move(samples), tol);
}

std::vector<double> invariant_residual(const LindbladModel& m, const InvariantTrajectory& traj) {
  const double dt = traj.uniform_dt(3);
  if (traj.dim() != m.dim()) throw InvalidInput("invariant_residual: dimension mismatch");
  const auto cache = cache_dissipators(m);
  std::vector<double> out;
  out.reserve(traj.size() - 2);
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const Operator fd = (traj.at(k + 1) - traj.at(k - 1)) / (2.0 * dt);
    out.push_back(max_abs(fd - adjoint(m, cache, traj.at(k), traj.times()[k])));
  }
  return out;
}

ExpectationSeries expectation_series(const InvariantTrajectory& itraj,
                                     const StateTrajectory& straj) {
  if (itraj.size() != straj.size() || itraj.size() == 0) {
    throw InvalidInput("expectation_series: trajectories have different lengths");
  }
  for (std::size_t k = 0; k < itraj.size(); ++k) {
    const double a = itraj.times()[k];
    const double b = straj.times[k];
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
      throw InvalidInput("expectation_series: time grids differ at sample " + std::to_string(k));
    }
  }
  if (itraj.dim() != static_cast<std::size_t>(straj.states.front().rows())) {
    throw InvalidInput("expectation_series: dimension mismatch");
  }
  ExpectationSeries out;
  out.values.reserve(itraj.size());
  for (std::size_t k = 0; k < itraj.size(); ++k) {
    out.values.push_back((itraj.at(k) * straj.states[k]).trace().real());
  }
  for (double v : out.values) out.defect = std::max(out.defect, std::abs(v - out.values.front()));
  return out;
}

std::vector<EigenFlowRecord> eigenflow(const LindbladModel& m, const InvariantTrajectory& traj,
                                       const Tolerances& tol) {
  const double dt = traj.uniform_dt(3);
  if (traj.dim() != m.dim()) throw InvalidInput("eigenflow: dimension mismatch");
  std::vector<EigenFlowRecord> out;
  const auto& eigs = traj.eigensystems();
  for (std::size_t k = 1; k + 1 < traj.size(); ++k) {
    const double t = traj.times()[k];
    const Operator& inv = traj.at(k);
    const auto& es = eigs[k];
    std::vector<Operator> ops;
    for (std::size_t a = 0; a < m.dissipators().size(); ++a) ops.push_back(m.lindblad_operator(a, t));
    const double scale = std::max(1.0, max_abs(inv));
    for (std::size_t j = 0; j < es.size(); ++j) {
      const Vector psi = es.vector(j);
      const double lambda = es.values[j];
      double rhs = 0.0;
      for (const auto& f : ops) {
        const Vector fpsi = f * psi;
        rhs += (lambda * fpsi.squaredNorm() - fpsi.dot(inv * fpsi)).real();
      }
      EigenFlowRecord rec;
      rec.time = t;
      rec.index = j;
      rec.lambda = lambda;
      rec.rhs = rhs;
      rec.fd = (eigs[k + 1].values[j] - eigs[k - 1].values[j]) / (2.0 * dt);
      rec.defect = std::abs(rec.rhs - rec.fd);
      rec.degenerate = es.gap(j) < tol.degeneracy * scale;
      out.push_back(rec);
    }
  }
  return out;
}

}  // namespace qinv
