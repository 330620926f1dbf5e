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

#include "qinv/block_invariants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qinv/errors.hpp"

namespace qinv {

namespace {

Operator id_rhs(const BlockData& b, const Operator& id) {
  const Operator k = b.g.d + b.h.d;
  return -kI * (k * id - id * k);
}

Operator ic_rhs(const BlockData& b, const Operator& ic, const Operator& id) {
  const auto n = ic.rows();
  Operator k = b.g.c + b.h.c;
  Operator source = Operator::Zero(n, n);
  Operator decay = Operator::Zero(n, n);
  for (std::size_t a = 0; a < b.lindblad.size(); ++a) {
    const double r = b.rates[a];
    if (r == 0.0) continue;
    const auto& lb = b.lindblad[a];
    const Operator a_dag = lb.a.adjoint();
    const Operator b_dag = lb.b.adjoint();
    k += (0.5 * kI * r) * (a_dag * lb.a);
    source += r * (a_dag * id * lb.a);
    const Operator bb = b_dag * lb.b;
    decay += r * (0.5 * (bb * ic + ic * bb) - b_dag * ic * lb.b);
  }
  return -kI * (k * ic - ic * k.adjoint()) - source + decay;
}

void require_block_dims(const BlockData& b, const Operator& id, const Operator& ic) {
  if (id.rows() != b.h.d.rows() || id.cols() != b.h.d.cols()) {
    throw InvalidInput("block invariant: I^D dimension does not match the DFS block");
  }
  if (ic.rows() != b.h.c.rows() || ic.cols() != b.h.c.cols()) {
    throw InvalidInput("block invariant: I^C dimension does not match the complement block");
  }
}

void require_same_grid(const std::vector<double>& a, const std::vector<double>& b, const char* what) {
  if (a.size() != b.size()) throw InvalidInput(std::string(what) + ": grids differ in length");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-12 * std::max(1.0, std::abs(a[k]))) {
      throw InvalidInput(std::string(what) + ": grids differ at sample " + std::to_string(k));
    }
  }
}

}  // namespace

InvariantTrajectory propagate_ID(const BlockSchedule& blocks, const Operator& id0,
                                 const TimeGrid& grid, const Tolerances& tol) {
  grid.validate();
  require_square(id0, "propagate_ID");
  const BlockData first = blocks(0.0);
  if (id0.rows() != first.h.d.rows()) throw InvalidInput("propagate_ID: I^D dimension mismatch");
  if (!is_hermitian(id0, tol.hermitian)) throw InvalidInput("propagate_ID: I^D is not Hermitian");

  const auto rhs = [&](double t, const Operator& id) { return id_rhs(blocks(t), id); };
  std::vector<Operator> samples{symmetrize(id0)};
  samples.reserve(grid.steps + 1);
  for (std::size_t k = 1; k <= grid.steps; ++k) {
    samples.push_back(symmetrize(rk4_step<Operator>(rhs, grid.time(k - 1), samples.back(), grid.dt())));
  }
  return InvariantTrajectory::from_samples(grid.times(), std::move(samples), tol);
}

InvariantTrajectory propagate_IC(const BlockSchedule& blocks, const InvariantTrajectory& id_traj,
                                 const Operator& ic0, const TimeGrid& grid, const Tolerances& tol) {
  grid.validate();
  require_square(ic0, "propagate_IC");
  require_same_grid(grid.times(), id_traj.times(), "propagate_IC");
  const BlockData first = blocks(0.0);
  require_block_dims(first, id_traj.at(0), ic0);
  if (!is_hermitian(ic0, tol.hermitian)) throw InvalidInput("propagate_IC: I^C is not Hermitian");

  const double h = grid.dt();
  const auto id_half_step = [&](double t, const Operator& id) {
    const auto rhs = [&](double s, const Operator& x) { return id_rhs(blocks(s), x); };
    return rk4_step<Operator>(rhs, t, id, 0.5 * h);
  };

  std::vector<Operator> samples{symmetrize(ic0)};
  samples.reserve(grid.steps + 1);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t = grid.time(k);
    const BlockData b0 = blocks(t);
    const BlockData bm = blocks(t + 0.5 * h);
    const BlockData b1 = blocks(t + h);
    const Operator& id0 = id_traj.at(k);
    const Operator id_mid = id_half_step(t, id0);
    const Operator& id1 = id_traj.at(k + 1);
    const Operator& y = samples.back();
    const Operator k1 = ic_rhs(b0, y, id0);
    const Operator k2 = ic_rhs(bm, y + (0.5 * h) * k1, id_mid);
    const Operator k3 = ic_rhs(bm, y + (0.5 * h) * k2, id_mid);
    const Operator k4 = ic_rhs(b1, y + h * k3, id1);
    samples.push_back(symmetrize(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)));
  }
  return InvariantTrajectory::from_samples(grid.times(), std::move(samples), tol);
}

Operator assemble_invariant(const BlockInvariant& b) {
  const auto& d = b.decomposition;
  if (static_cast<std::size_t>(b.id.rows()) != d.dfs_dim() || b.id.rows() != b.id.cols() ||
      static_cast<std::size_t>(b.ic.rows()) != d.comp_dim() || b.ic.rows() != b.ic.cols()) {
    throw InvalidInput("assemble_invariant: block dimensions do not match the decomposition");
  }
  const Operator& p = d.dfs_basis().vectors();
  const Operator& q = d.comp_basis().vectors();
  Operator full = p * b.id * p.adjoint();
  if (d.comp_dim() > 0) full += q * b.ic * q.adjoint();
  return full;
}

BlockInvariant project_blocks(const DfsDecomposition& d, const Operator& full) {
  if (static_cast<std::size_t>(full.rows()) != d.dim() || full.rows() != full.cols()) {
    throw InvalidInput("project_blocks: dimension mismatch");
  }
  const Operator& p = d.dfs_basis().vectors();
  const Operator& q = d.comp_basis().vectors();
  return {p.adjoint() * full * p, q.adjoint() * full * q, d};
}

InvariantTrajectory assemble_trajectory(const DfsDecomposition& d, const InvariantTrajectory& id_traj,
                                        const InvariantTrajectory& ic_traj, const Tolerances& tol) {
  require_same_grid(id_traj.times(), ic_traj.times(), "assemble_trajectory");
  std::vector<Operator> full;
  full.reserve(id_traj.size());
  for (std::size_t k = 0; k < id_traj.size(); ++k) {
    full.push_back(assemble_invariant({id_traj.at(k), ic_traj.at(k), d}));
  }
  return InvariantTrajectory::from_samples(id_traj.times(), std::move(full), tol);
}

FullInvariantReport verify_full_invariant(const LindbladModel& m, const DfsDecomposition& d,
                                          const InvariantTrajectory& assembled,
                                          const Tolerances& tol) {
  FullInvariantReport out;
  out.residuals = invariant_residual(m, assembled);
  for (double r : out.residuals) out.max_residual = std::max(out.max_residual, r);

  const auto& times = assembled.times();
  if (times.front() != 0.0) throw InvalidInput("verify_full_invariant: grid must start at t = 0");
  const TimeGrid grid{times.back(), times.size() - 1};
  const InvariantTrajectory direct = propagate_invariant(m, assembled.at(0), grid, tol);
  for (const auto& inv : direct.invariants()) {
    out.direct_offdiag.push_back(offdiagonal_block_norm(d, inv));
    out.max_direct_offdiag = std::max(out.max_direct_offdiag, out.direct_offdiag.back());
  }
  return out;
}

std::vector<EigenFlowRecord> complement_eigenflow(const BlockSchedule& blocks,
                                                  const InvariantTrajectory& id_traj,
                                                  const InvariantTrajectory& ic_traj,
                                                  const Tolerances& tol) {
  require_same_grid(id_traj.times(), ic_traj.times(), "complement_eigenflow");
  const double dt = ic_traj.uniform_dt(3);
  std::vector<EigenFlowRecord> out;
  for (std::size_t k = 1; k + 1 < ic_traj.size(); ++k) {
    const double t = ic_traj.times()[k];
    const BlockData b = blocks(t);
    require_block_dims(b, id_traj.at(k), ic_traj.at(k));
    const auto& d_sys = id_traj.eigensystems()[k];
    const auto& c_sys = ic_traj.eigensystems()[k];
    const double scale = std::max(1.0, max_abs(ic_traj.at(k)));
    for (std::size_t n = 0; n < c_sys.size(); ++n) {
      const Vector psi_n = c_sys.vector(n);
      const double lambda_n = c_sys.values[n];
      double rhs = 0.0;
      for (std::size_t a = 0; a < b.lindblad.size(); ++a) {
        const auto& lb = b.lindblad[a];
        double acc = 0.0;
        const Vector a_psi = lb.a * psi_n;
        for (std::size_t j = 0; j < d_sys.size(); ++j) {
          acc += (lambda_n - d_sys.values[j]) * std::norm(d_sys.vector(j).dot(a_psi));
        }
        const Vector b_psi = lb.b * psi_n;
        for (std::size_t m = 0; m < c_sys.size(); ++m) {
          if (m == n) continue;
          acc += (lambda_n - c_sys.values[m]) * std::norm(c_sys.vector(m).dot(b_psi));
        }
        rhs += b.rates[a] * acc;
      }
      EigenFlowRecord rec;
      rec.time = t;
      rec.index = n;
      rec.lambda = lambda_n;
      rec.rhs = rhs;
      rec.fd = (ic_traj.eigensystems()[k + 1].values[n] - ic_traj.eigensystems()[k - 1].values[n]) /
               (2.0 * dt);
      rec.defect = std::abs(rec.rhs - rec.fd);
      rec.degenerate = c_sys.gap(n) < tol.degeneracy * scale;
      out.push_back(rec);
    }
  }
  return out;
}

}  // namespace qinv
