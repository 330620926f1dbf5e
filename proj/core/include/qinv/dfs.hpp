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
#include <functional>
#include <optional>
#include <vector>

#include "qinv/lindblad.hpp"
#include "qinv/operator.hpp"
#include "qinv/subspace.hpp"
#include "qinv/tolerances.hpp"

namespace qinv {

/// An operator split over (DFS, complement):  [[D, N], [N^dag-ish, C]].
/// `n` is the upper-right D x (N-D) block.
struct OperatorBlocks {
  Operator d;
  Operator n;
  Operator c;
};

/// Lindblad operator in block form [[c I, A], [0, B]] (base operator,
/// rate not folded in).
struct LindbladBlocks {
  Complex c{0.0, 0.0};
  Operator a;
  Operator b;
  double lower_left_norm = 0.0;
};

/// Everything the block-invariant equations need at one instant.
struct BlockData {
  double time = 0.0;
  OperatorBlocks h;
  OperatorBlocks g;
  std::vector<LindbladBlocks> lindblad;
  std::vector<double> rates;  // rate_a(time)
};

/// Split of the Hilbert space into a candidate decoherence-free subspace and
/// its orthogonal complement, with the common eigenvalues c_a of the base
/// Lindblad operators on it.
class DfsDecomposition {
 public:
  DfsDecomposition(SubspaceBasis dfs, SubspaceBasis complement, std::vector<Complex> common_eigenvalues);

  const SubspaceBasis& dfs_basis() const { return dfs_; }
  const SubspaceBasis& comp_basis() const { return comp_; }
  const std::vector<Complex>& common_eigenvalues() const { return c_; }
  std::size_t dfs_dim() const { return dfs_.size(); }
  std::size_t comp_dim() const { return comp_.size(); }
  std::size_t dim() const { return dfs_.ambient_dim(); }

  /// Columns [DFS | complement]; unitary.
  Operator joint_basis() const;

  /// Filled by block_decompose / find_static_dfs.
  const std::optional<BlockData>& blocks() const { return blocks_; }
  void set_blocks(BlockData blocks) { blocks_ = std::move(blocks); }

  bool heff_invariant = false;
  double heff_residual = 0.0;
  /// D >= 2: the basis states are degenerate common eigenstates.
  bool degenerate() const { return dfs_dim() >= 2; }
  bool is_dfs() const { return heff_invariant && degenerate(); }

 private:
  SubspaceBasis dfs_;
  SubspaceBasis comp_;
  std::vector<Complex> c_;
  std::optional<BlockData> blocks_;
};

/// Every common eigenspace (eigenvalue tuple c_1..c_K of the base Lindblad
/// operators, clustered at `tol`) of dimension >= 1, with static-basis blocks
/// filled at time t and the H_eff invariance flag set. Output is sorted
/// lexicographically by (Re c, Im c). Throws UnsupportedModel if some
/// Lindblad operator is not diagonalizable (eigenvector condition > 1e8).
std::vector<DfsDecomposition> find_static_dfs(const LindbladModel& m, double t, double tol);

/// Time-dependent pair of bases (DFS columns, complement columns).
struct BasisPair {
  Operator dfs;
  Operator comp;
};

/// User-supplied moving basis. Without an analytic derivative, central
/// differences with h = 1e-6 * horizon are used.
struct BasisTrajectory {
  std::function<BasisPair(double)> basis;
  std::function<BasisPair(double)> derivative;  // optional
  double horizon = 1.0;
};

/// G(t) = i ( sum_j |Phi_j><dPhi_j/dt| + sum_n |Phi_n^perp><dPhi_n^perp/dt| ).
Operator compute_G(const BasisTrajectory& bt, double t, const Tolerances& tol = kDefaultTolerances);

/// H_eff = G + H(t) + (i/2) sum_a (c_a^* F_a - c_a F_a^dag), rates folded in.
Operator compute_Heff(const LindbladModel& m, const DfsDecomposition& d, const Operator& g, double t);

/// max_{n,j} |<Phi_n^perp| H_eff |Phi_j>|
double dfs_condition_residual(const Operator& heff, const DfsDecomposition& d);

/// Copy of `d` with blocks of F_a (base), H(t) and G filled. Throws NotADfs
/// when a lower-left block of some F_a, or the deviation of its DFS block
/// from c_a I, exceeds tol.dfs.
DfsDecomposition block_decompose(const LindbladModel& m, const DfsDecomposition& d,
                                 const Operator& g, double t,
                                 const Tolerances& tol = kDefaultTolerances);

/// X = i(G^N + H^N) - sum_a c_a^*(t)/2 A_a(t).
Operator decoupling_operator(const BlockData& blocks);

struct DecouplingResidual {
  double residual = 0.0;  // ||I^D X - X I^C||_max
  double x_norm = 0.0;    // ||X||_max
};

DecouplingResidual decoupling_residual(const DfsDecomposition& d, const Operator& id,
                                       const Operator& ic);

/// Block data as a function of time.
using BlockSchedule = std::function<BlockData(double)>;

/// Static bases (G = 0): blocks of each term and operator are computed once
/// and recombined with the schedules at each t.
BlockSchedule static_block_schedule(const LindbladModel& m, const DfsDecomposition& d,
                                    const Tolerances& tol = kDefaultTolerances);

/// Moving bases: G and all blocks recomputed at each t.
BlockSchedule moving_block_schedule(const LindbladModel& m, BasisTrajectory bt,
                                    std::vector<Complex> common_eigenvalues,
                                    const Tolerances& tol = kDefaultTolerances);

/// Max-abs entry of the DFS/complement coupling block of `full`.
double offdiagonal_block_norm(const DfsDecomposition& d, const Operator& full);

}  // namespace qinv
