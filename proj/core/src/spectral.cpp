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

#include "qinv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qinv/errors.hpp"

namespace qinv {

Operator EigenSystem::reconstruct() const {
  const auto n = vectors.rows();
  Operator out = Operator::Zero(n, n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Vector v = vector(k);
    out += values[k] * (v * v.adjoint());
  }
  return out;
}

double EigenSystem::gap(std::size_t k) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j != k) best = std::min(best, std::abs(values[j] - values[k]));
  }
  return best;
}

Operator modified_gram_schmidt(const Operator& vectors, double drop_tol) {
  std::vector<Vector> kept;
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Vector v = vectors.col(c);
    // two passes keep the result orthonormal to working precision
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) v -= q.dot(v) * q;
    }
    const double norm = v.norm();
    if (norm > drop_tol) kept.push_back(v / norm);
  }
  Operator out(vectors.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = kept[k];
  return out;
}

namespace {

struct Cluster {
  std::size_t begin;
  std::size_t end;  // one past last
};

std::vector<Cluster> cluster_ascending(const Eigen::VectorXd& values, double tol) {
  std::vector<Cluster> out;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(values.size()); ++k) {
    if (k == static_cast<std::size_t>(values.size()) ||
        values(static_cast<Eigen::Index>(k)) - values(static_cast<Eigen::Index>(k - 1)) > tol) {
      out.push_back({start, k});
      start = k;
    }
  }
  return out;
}

// Ascending eigenpairs with degenerate clusters re-orthonormalized.
EigenSystem ascending_decomposition(const Operator& m, const Tolerances& tol,
                                    std::vector<Cluster>* clusters_out) {
  require_square(m, "spectral_decompose");
  if (!is_hermitian(m, tol.hermitian)) {
    throw InvalidInput("spectral_decompose: operator is not Hermitian (deviation " +
                       std::to_string(hermitian_deviation(m)) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Operator> solver(symmetrize(m));
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("spectral_decompose: eigensolver did not converge");
  }
  const Eigen::VectorXd& vals = solver.eigenvalues();
  Operator vecs = solver.eigenvectors();

  const double scale = std::max(vals.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  auto clusters = cluster_ascending(vals, tol.degeneracy * scale);
  for (const auto& c : clusters) {
    const auto width = static_cast<Eigen::Index>(c.end - c.begin);
    if (width < 2) continue;
    const auto begin = static_cast<Eigen::Index>(c.begin);
    Operator block = modified_gram_schmidt(vecs.middleCols(begin, width), 0.0);
    vecs.middleCols(begin, width) = block;
  }

  EigenSystem out;
  out.values.assign(vals.data(), vals.data() + vals.size());
  out.vectors = std::move(vecs);
  out.pairing.resize(out.values.size());
  std::iota(out.pairing.begin(), out.pairing.end(), std::size_t{0});
  if (clusters_out) *clusters_out = std::move(clusters);
  return out;
}

}  // namespace

EigenSystem spectral_decompose(const Operator& m, const Tolerances& tol) {
  return ascending_decomposition(m, tol, nullptr);
}

EigenSystem spectral_decompose(const Operator& m, const EigenSystem& reference,
                               const Tolerances& tol) {
  std::vector<Cluster> clusters;
  EigenSystem fresh = ascending_decomposition(m, tol, &clusters);
  const std::size_t n = fresh.size();
  if (reference.size() != n || reference.vectors.rows() != m.rows()) {
    throw InvalidInput("spectral_decompose: reference has a different dimension");
  }

  // overlap(k, r) = |<v_k | v_ref_r>|^2
  Eigen::MatrixXd overlap(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      overlap(k, r) = std::norm(fresh.vector(k).dot(reference.vector(r)));
    }
  }

  std::vector<std::size_t> slot_of(n, n);  // fresh index -> reference slot
  std::vector<bool> slot_taken(n, false);
  for (std::size_t round = 0; round < n; ++round) {
    double best = -1.0;
    std::size_t best_k = n, best_r = n;
    for (std::size_t r = 0; r < n; ++r) {
      if (slot_taken[r]) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (slot_of[k] != n) continue;
        if (overlap(k, r) > best) {
          best = overlap(k, r);
          best_k = k;
          best_r = r;
        }
      }
    }
    slot_of[best_k] = best_r;
    slot_taken[best_r] = true;
  }

  EigenSystem out;
  out.values.resize(n);
  out.pairing.resize(n);
  out.vectors.resize(m.rows(), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = slot_of[k];
    out.values[r] = fresh.values[k];
    out.pairing[r] = k;
    out.vectors.col(static_cast<Eigen::Index>(r)) = fresh.vector(k);
  }

  // Inside a degenerate cluster any rotation is an eigenbasis; pick the one
  // closest to the reference vectors.
  for (const auto& c : clusters) {
    if (c.end - c.begin < 2) continue;
    const auto begin = static_cast<Eigen::Index>(c.begin);
    const auto width = static_cast<Eigen::Index>(c.end - c.begin);
    const Operator span = fresh.vectors.middleCols(begin, width);
    std::vector<std::size_t> slots;
    for (std::size_t k = c.begin; k < c.end; ++k) slots.push_back(slot_of[k]);
    std::sort(slots.begin(), slots.end());
    Operator projected(m.rows(), width);
    for (Eigen::Index j = 0; j < width; ++j) {
      const Vector ref = reference.vector(slots[static_cast<std::size_t>(j)]);
      projected.col(j) = span * (span.adjoint() * ref);
    }
    const Operator aligned = modified_gram_schmidt(projected, 1e-8);
    if (aligned.cols() == width) {
      for (Eigen::Index j = 0; j < width; ++j) {
        out.vectors.col(static_cast<Eigen::Index>(slots[static_cast<std::size_t>(j)])) =
            aligned.col(j);
      }
    }
  }

  for (std::size_t r = 0; r < n; ++r) {
    const auto col = static_cast<Eigen::Index>(r);
    const Complex ov = reference.vectors.col(col).dot(out.vectors.col(col));
    if (std::abs(ov) > 0.0) out.vectors.col(col) *= std::conj(ov) / std::abs(ov);
  }
  return out;
}

}  // namespace qinv
