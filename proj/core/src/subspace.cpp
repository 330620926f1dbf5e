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

#include "qinv/subspace.hpp"

#include <string>

#include "qinv/errors.hpp"
#include "qinv/spectral.hpp"

namespace qinv {

SubspaceBasis::SubspaceBasis(Operator vectors, double ortho_tol) : vectors_(std::move(vectors)) {
  if (vectors_.rows() == 0) throw InvalidInput("SubspaceBasis: ambient dimension must be positive");
  if (vectors_.cols() > vectors_.rows()) {
    throw InvalidInput("SubspaceBasis: more vectors than the ambient dimension");
  }
  const double defect = orthonormality_defect(vectors_);
  if (defect > ortho_tol) {
    throw InvalidInput("SubspaceBasis: vectors are not orthonormal (defect " +
                       std::to_string(defect) + ")");
  }
}

SubspaceBasis SubspaceBasis::empty(std::size_t dim) {
  if (dim == 0) throw InvalidInput("SubspaceBasis: ambient dimension must be positive");
  SubspaceBasis out;
  out.vectors_ = Operator(static_cast<Eigen::Index>(dim), 0);
  return out;
}

SubspaceBasis SubspaceBasis::span_of(const Operator& columns, double rank_tol) {
  if (columns.cols() == 0) return empty(static_cast<std::size_t>(columns.rows()));
  Eigen::JacobiSVD<Operator> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  SubspaceBasis out;
  out.vectors_ = modified_gram_schmidt(svd.matrixU().leftCols(rank), 0.0);
  return out;
}

SubspaceBasis SubspaceBasis::canonical() const {
  const auto n = vectors_.rows();
  const auto d = vectors_.cols();
  Operator remaining = projector();
  Operator picked(n, d);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index step = 0; step < d; ++step) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      const double norm = remaining.col(k).norm();
      if (norm > best_norm * (1.0 + 1e-12) + 1e-15) {
        best_norm = norm;
        best = k;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    Vector v = remaining.col(best) / best_norm;
    picked.col(step) = v;
    remaining -= v * (v.adjoint() * remaining);
  }
  SubspaceBasis out;
  out.vectors_ = modified_gram_schmidt(picked, 0.0);
  return out;
}

SubspaceBasis SubspaceBasis::orthogonal_complement() const {
  const auto n = vectors_.rows();
  const Operator comp_projector = Operator::Identity(n, n) - projector();
  SubspaceBasis out = span_of(comp_projector, 1e-8);
  return out.canonical();
}

double SubspaceBasis::orthonormality_defect(const Operator& vectors) {
  if (vectors.cols() == 0) return 0.0;
  const Operator gram = vectors.adjoint() * vectors;
  return max_abs(gram - Operator::Identity(gram.rows(), gram.cols()));
}

SubspaceBasis subspace_intersection(const SubspaceBasis& a, const SubspaceBasis& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InvalidInput("subspace_intersection: ambient dimensions differ");
  }
  if (a.size() == 0 || b.size() == 0) return SubspaceBasis::empty(a.ambient_dim());
  // Singular values of A^dag B are the cosines of the principal angles.
  const Operator overlap = a.vectors().adjoint() * b.vectors();
  Eigen::JacobiSVD<Operator> svd(overlap, Eigen::ComputeFullU);
  const auto& cosines = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < cosines.size() && cosines(keep) >= 1.0 - tol) ++keep;
  if (keep == 0) return SubspaceBasis::empty(a.ambient_dim());
  const Operator directions = a.vectors() * svd.matrixU().leftCols(keep);
  return SubspaceBasis(modified_gram_schmidt(directions, 0.0));
}

}  // namespace qinv
