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

#include "qinv/dfs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qinv/errors.hpp"

namespace qinv {

namespace {

struct Eigenspace {
  Complex value;
  SubspaceBasis basis;
};

// Right eigenspaces of a diagonalizable operator, eigenvalues clustered by
// single linkage at distance `tol * max(1, ||F||)`.
std::vector<Eigenspace> eigenspaces(const Operator& f, std::size_t index, double tol) {
  Eigen::ComplexEigenSolver<Operator> solver(f, true);
  if (solver.info() != Eigen::Success) {
    throw UnsupportedModel("find_static_dfs: eigensolver failed on Lindblad operator " +
                           std::to_string(index));
  }
  const Operator& vecs = solver.eigenvectors();
  const Eigen::VectorXcd& vals = solver.eigenvalues();
  Eigen::JacobiSVD<Operator> svd(vecs);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e8)) {
    throw UnsupportedModel("find_static_dfs: Lindblad operator " + std::to_string(index) +
                           " is not diagonalizable (eigenvector condition number " +
                           std::to_string(cond) + ")");
  }

  const auto n = static_cast<std::size_t>(vals.size());
  const double radius = tol * std::max(1.0, max_abs(f));
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(vals(static_cast<Eigen::Index>(i)) - vals(static_cast<Eigen::Index>(j))) <= radius) {
        parent[find(i)] = find(j);
      }
    }
  }

  std::vector<Eigenspace> out;
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (done[root]) continue;
    done[root] = true;
    std::vector<Eigen::Index> members;
    Complex mean{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      if (find(j) == root) {
        members.push_back(static_cast<Eigen::Index>(j));
        mean += vals(static_cast<Eigen::Index>(j));
      }
    }
    mean /= static_cast<double>(members.size());
    Operator cols(vecs.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t k = 0; k < members.size(); ++k) {
      cols.col(static_cast<Eigen::Index>(k)) = vecs.col(members[k]);
    }
    out.push_back({mean, SubspaceBasis::span_of(cols, 1e-8)});
  }
  return out;
}

bool lexicographic_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
    if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
  }
  return a.size() < b.size();
}

OperatorBlocks split(const Operator& op, const DfsDecomposition& d) {
  const Operator& p = d.dfs_basis().vectors();
  const Operator& q = d.comp_basis().vectors();
  return {p.adjoint() * op * p, p.adjoint() * op * q, q.adjoint() * op * q};
}

Operator zero(std::size_t n) {
  return Operator::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

}  // namespace

DfsDecomposition::DfsDecomposition(SubspaceBasis dfs, SubspaceBasis complement,
                                   std::vector<Complex> common_eigenvalues)
    : dfs_(std::move(dfs)), comp_(std::move(complement)), c_(std::move(common_eigenvalues)) {
  if (dfs_.ambient_dim() != comp_.ambient_dim()) {
    throw InvalidInput("DfsDecomposition: bases live in different spaces");
  }
  if (dfs_.size() == 0) throw InvalidInput("DfsDecomposition: empty DFS basis");
  const Operator joint = joint_basis();
  if (joint.cols() != joint.rows()) {
    throw InvalidInput("DfsDecomposition: DFS and complement do not span the space");
  }
  const double defect = SubspaceBasis::orthonormality_defect(joint);
  if (defect > 1e-10) {
    throw InvalidInput("DfsDecomposition: DFS and complement are not jointly orthonormal (defect " +
                       std::to_string(defect) + ")");
  }
}

Operator DfsDecomposition::joint_basis() const {
  const auto d = static_cast<Eigen::Index>(dfs_dim());
  Operator joint(static_cast<Eigen::Index>(dim()), d + static_cast<Eigen::Index>(comp_dim()));
  joint.leftCols(d) = dfs_.vectors();
  joint.rightCols(joint.cols() - d) = comp_.vectors();
  return joint;
}

std::vector<DfsDecomposition> find_static_dfs(const LindbladModel& m, double t, double tol) {
  const std::size_t n = m.dim();
  std::vector<std::vector<Eigenspace>> per_op;
  for (std::size_t a = 0; a < m.dissipators().size(); ++a) {
    per_op.push_back(eigenspaces(m.dissipators()[a].op, a, tol));
  }

  struct Candidate {
    std::vector<Complex> c;
    SubspaceBasis basis;
  };
  std::vector<Candidate> found;
  // Depth-first over eigenvalue tuples, pruning empty intersections early.
  std::function<void(std::size_t, std::vector<Complex>&, const SubspaceBasis&)> visit =
      [&](std::size_t a, std::vector<Complex>& tuple, const SubspaceBasis& current) {
        if (current.size() == 0) return;
        if (a == per_op.size()) {
          found.push_back({tuple, current});
          return;
        }
        for (const auto& space : per_op[a]) {
          tuple.push_back(space.value);
          visit(a + 1, tuple, subspace_intersection(current, space.basis, tol));
          tuple.pop_back();
        }
      };
  std::vector<Complex> tuple;
  visit(0, tuple, SubspaceBasis(Operator::Identity(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(n))));
  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& x, const Candidate& y) { return lexicographic_less(x.c, y.c); });

  std::vector<DfsDecomposition> out;
  const Operator g = zero(n);
  for (auto& cand : found) {
    SubspaceBasis dfs = cand.basis.canonical();
    SubspaceBasis comp = dfs.orthogonal_complement();
    DfsDecomposition d(std::move(dfs), std::move(comp), std::move(cand.c));
    Tolerances block_tol;
    block_tol.dfs = std::max(block_tol.dfs, tol);
    DfsDecomposition filled = block_decompose(m, d, g, t, block_tol);
    const Operator heff = compute_Heff(m, filled, g, t);
    filled.heff_residual = dfs_condition_residual(heff, filled);
    filled.heff_invariant = filled.heff_residual <= tol * std::max(1.0, max_abs(heff));
    out.push_back(std::move(filled));
  }
  return out;
}

Operator compute_G(const BasisTrajectory& bt, double t, const Tolerances& tol) {
  if (!bt.basis) throw InvalidInput("compute_G: basis trajectory has no basis function");
  const auto joint = [](const BasisPair& p) {
    if (p.dfs.rows() != p.comp.rows()) throw InvalidInput("compute_G: basis blocks differ in rows");
    Operator u(p.dfs.rows(), p.dfs.cols() + p.comp.cols());
    u.leftCols(p.dfs.cols()) = p.dfs;
    u.rightCols(p.comp.cols()) = p.comp;
    return u;
  };
  const Operator u = joint(bt.basis(t));
  if (u.rows() != u.cols()) throw InvalidInput("compute_G: bases do not span the space");
  if (SubspaceBasis::orthonormality_defect(u) > tol.ortho) {
    throw InvalidInput("compute_G: basis is not orthonormal at t = " + std::to_string(t));
  }
  Operator du;
  if (bt.derivative) {
    du = joint(bt.derivative(t));
  } else {
    const double h = 1e-6 * bt.horizon;
    if (t - h >= 0.0) {
      du = (joint(bt.basis(t + h)) - joint(bt.basis(t - h))) / (2.0 * h);
    } else {
      du = (-3.0 * u + 4.0 * joint(bt.basis(t + h)) - joint(bt.basis(t + 2.0 * h))) / (2.0 * h);
    }
  }
  const Operator g = kI * (u * du.adjoint());
  const double drift = hermitian_deviation(g);
  if (drift > 1e-5 * std::max(1.0, max_abs(g))) {
    throw InvalidInput("compute_G: G is not Hermitian (deviation " + std::to_string(drift) + ")");
  }
  return symmetrize(g);
}

Operator compute_Heff(const LindbladModel& m, const DfsDecomposition& d, const Operator& g, double t) {
  if (static_cast<std::size_t>(g.rows()) != m.dim() || d.dim() != m.dim()) {
    throw InvalidInput("compute_Heff: dimension mismatch");
  }
  const auto& c = d.common_eigenvalues();
  if (c.size() != m.dissipators().size()) {
    throw InvalidInput("compute_Heff: decomposition carries " + std::to_string(c.size()) +
                       " eigenvalues for " + std::to_string(m.dissipators().size()) + " operators");
  }
  Operator heff = g + m.hamiltonian(t);
  for (std::size_t a = 0; a < c.size(); ++a) {
    const double r = m.rate(a, t);
    const Operator& f = m.dissipators()[a].op;
    heff += (0.5 * kI * r) * (std::conj(c[a]) * f - c[a] * f.adjoint());
  }
  return heff;
}

double dfs_condition_residual(const Operator& heff, const DfsDecomposition& d) {
  if (static_cast<std::size_t>(heff.rows()) != d.dim()) {
    throw InvalidInput("dfs_condition_residual: dimension mismatch");
  }
  if (d.comp_dim() == 0) return 0.0;
  return max_abs(d.comp_basis().vectors().adjoint() * heff * d.dfs_basis().vectors());
}

DfsDecomposition block_decompose(const LindbladModel& m, const DfsDecomposition& d,
                                 const Operator& g, double t, const Tolerances& tol) {
  if (d.dim() != m.dim() || static_cast<std::size_t>(g.rows()) != m.dim()) {
    throw InvalidInput("block_decompose: dimension mismatch");
  }
  const Operator& p = d.dfs_basis().vectors();
  const Operator& q = d.comp_basis().vectors();
  const auto dfs_dim = static_cast<Eigen::Index>(d.dfs_dim());

  std::vector<Complex> c = d.common_eigenvalues();
  const bool infer_c = c.empty() && !m.dissipators().empty();
  if (!infer_c && c.size() != m.dissipators().size()) {
    throw InvalidInput("block_decompose: wrong number of common eigenvalues");
  }

  BlockData blocks;
  blocks.time = t;
  for (std::size_t a = 0; a < m.dissipators().size(); ++a) {
    const Operator& f = m.dissipators()[a].op;
    const Operator upper = p.adjoint() * f * p;
    LindbladBlocks lb;
    lb.c = infer_c ? upper.trace() / static_cast<double>(dfs_dim) : c[a];
    if (infer_c) c.push_back(lb.c);
    lb.a = p.adjoint() * f * q;
    lb.b = q.adjoint() * f * q;
    lb.lower_left_norm = d.comp_dim() == 0 ? 0.0 : max_abs(q.adjoint() * f * p);
    const double scale = std::max(1.0, max_abs(f));
    if (lb.lower_left_norm > tol.dfs * scale) {
      throw NotADfs("block_decompose: Lindblad operator " + std::to_string(a) +
                        " maps the DFS out of itself (lower-left block norm " +
                        std::to_string(lb.lower_left_norm) + ")",
                    lb.lower_left_norm);
    }
    const double diag_defect = max_abs(upper - lb.c * Operator::Identity(dfs_dim, dfs_dim));
    if (diag_defect > tol.dfs * scale) {
      throw NotADfs("block_decompose: DFS block of Lindblad operator " + std::to_string(a) +
                        " is not c * identity (deviation " + std::to_string(diag_defect) + ")",
                    diag_defect);
    }
    blocks.lindblad.push_back(std::move(lb));
    blocks.rates.push_back(m.rate(a, t));
  }
  DfsDecomposition out(d.dfs_basis(), d.comp_basis(), std::move(c));
  out.heff_invariant = d.heff_invariant;
  out.heff_residual = d.heff_residual;
  blocks.h = split(m.hamiltonian(t), out);
  blocks.g = split(g, out);
  out.set_blocks(std::move(blocks));
  return out;
}

Operator decoupling_operator(const BlockData& blocks) {
  Operator x = kI * (blocks.g.n + blocks.h.n);
  for (std::size_t a = 0; a < blocks.lindblad.size(); ++a) {
    const auto& lb = blocks.lindblad[a];
    x -= (0.5 * blocks.rates[a] * std::conj(lb.c)) * lb.a;
  }
  return x;
}

DecouplingResidual decoupling_residual(const DfsDecomposition& d, const Operator& id,
                                       const Operator& ic) {
  if (!d.blocks()) throw InvalidInput("decoupling_residual: decomposition has no blocks");
  if (static_cast<std::size_t>(id.rows()) != d.dfs_dim() || id.rows() != id.cols() ||
      static_cast<std::size_t>(ic.rows()) != d.comp_dim() || ic.rows() != ic.cols()) {
    throw InvalidInput("decoupling_residual: block dimensions do not match the decomposition");
  }
  const Operator x = decoupling_operator(*d.blocks());
  return {max_abs(id * x - x * ic), max_abs(x)};
}

BlockSchedule static_block_schedule(const LindbladModel& m, const DfsDecomposition& d,
                                    const Tolerances& tol) {
  const Operator g0 = zero(m.dim());
  // One decomposition validates the split; per-term blocks are then reused.
  const DfsDecomposition base = block_decompose(m, d, g0, 0.0, tol);
  std::vector<OperatorBlocks> term_blocks;
  for (const auto& term : m.terms()) term_blocks.push_back(split(term.op, base));
  const OperatorBlocks g_blocks = split(g0, base);
  std::vector<LindbladBlocks> lindblad = base.blocks()->lindblad;
  std::vector<CoefficientSchedule> coeffs;
  for (const auto& term : m.terms()) coeffs.push_back(term.coefficient);
  std::vector<CoefficientSchedule> rates;
  for (const auto& diss : m.dissipators()) rates.push_back(diss.rate);
  const auto dd = static_cast<Eigen::Index>(base.dfs_dim());
  const auto cc = static_cast<Eigen::Index>(base.comp_dim());

  return [=](double t) {
    BlockData out;
    out.time = t;
    out.h = {Operator::Zero(dd, dd), Operator::Zero(dd, cc), Operator::Zero(cc, cc)};
    for (std::size_t i = 0; i < term_blocks.size(); ++i) {
      const double s = coeffs[i].eval(t);
      out.h.d += s * term_blocks[i].d;
      out.h.n += s * term_blocks[i].n;
      out.h.c += s * term_blocks[i].c;
    }
    out.g = g_blocks;
    out.lindblad = lindblad;
    for (std::size_t a = 0; a < rates.size(); ++a) {
      const double r = rates[a].eval(t);
      if (r < 0.0) throw InvalidInput("block schedule: negative rate at t = " + std::to_string(t));
      out.rates.push_back(r);
    }
    return out;
  };
}

BlockSchedule moving_block_schedule(const LindbladModel& m, BasisTrajectory bt,
                                    std::vector<Complex> common_eigenvalues,
                                    const Tolerances& tol) {
  return [m, bt = std::move(bt), c = std::move(common_eigenvalues), tol](double t) {
    const BasisPair pair = bt.basis(t);
    DfsDecomposition d(SubspaceBasis(pair.dfs, tol.ortho), SubspaceBasis(pair.comp, tol.ortho), c);
    return *block_decompose(m, d, compute_G(bt, t, tol), t, tol).blocks();
  };
}

double offdiagonal_block_norm(const DfsDecomposition& d, const Operator& full) {
  if (static_cast<std::size_t>(full.rows()) != d.dim()) {
    throw InvalidInput("offdiagonal_block_norm: dimension mismatch");
  }
  if (d.comp_dim() == 0) return 0.0;
  return max_abs(d.dfs_basis().vectors().adjoint() * full * d.comp_basis().vectors());
}

}  // namespace qinv
