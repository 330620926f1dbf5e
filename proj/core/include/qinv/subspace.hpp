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

#include "qinv/operator.hpp"
#include "qinv/tolerances.hpp"

namespace qinv {

/// Orthonormal basis of a D-dimensional subspace of C^dim, stored as the
/// columns of a dim x D matrix. D = 0 is allowed.
class SubspaceBasis {
 public:
  /// Takes columns that must already be orthonormal within `ortho_tol`.
  explicit SubspaceBasis(Operator vectors, double ortho_tol = kDefaultTolerances.ortho);

  /// Empty subspace of C^dim.
  static SubspaceBasis empty(std::size_t dim);

  /// Orthonormal basis of span(columns); dependent columns are dropped.
  static SubspaceBasis span_of(const Operator& columns, double rank_tol = 1e-10);

  /// Deterministic basis of the same span: repeatedly picks the standard
  /// basis vector with the largest remaining projection (ties to the lower
  /// index) and orthonormalizes it. Coordinate subspaces come back as
  /// coordinate vectors in index order.
  SubspaceBasis canonical() const;

  /// Canonical basis of the orthogonal complement.
  SubspaceBasis orthogonal_complement() const;

  std::size_t ambient_dim() const { return static_cast<std::size_t>(vectors_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(vectors_.cols()); }
  const Operator& vectors() const { return vectors_; }
  Vector vector(std::size_t k) const { return vectors_.col(static_cast<Eigen::Index>(k)); }

  Operator projector() const { return vectors_ * vectors_.adjoint(); }

  /// max |<v_i|v_j> - delta_ij|
  static double orthonormality_defect(const Operator& vectors);

 private:
  SubspaceBasis() = default;
  Operator vectors_;
};

/// Orthonormal basis of span(a) ∩ span(b): principal directions whose
/// cosine is at least 1 - tol. Empty intersection returns a D = 0 basis.
SubspaceBasis subspace_intersection(const SubspaceBasis& a, const SubspaceBasis& b, double tol);

}  // namespace qinv
