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
#include <vector>

#include "qinv/operator.hpp"
#include "qinv/tolerances.hpp"

namespace qinv {

/// Eigenpairs of a Hermitian operator.
///
/// Without a reference the values are ascending. With a reference, slot k
/// holds the eigenpair that best continues slot k of the reference, so a
/// sequence of decompositions traces smooth eigenvalue curves.
struct EigenSystem {
  std::vector<double> values;
  Operator vectors;  // column k pairs with values[k]
  // pairing[k] is the ascending-order index of the eigenpair placed in slot k.
  std::vector<std::size_t> pairing;

  std::size_t size() const { return values.size(); }
  Vector vector(std::size_t k) const { return vectors.col(static_cast<Eigen::Index>(k)); }

  /// sum_k lambda_k |v_k><v_k|
  Operator reconstruct() const;

  /// Distance from values[k] to the nearest other eigenvalue (infinity for
  /// a 1x1 system).
  double gap(std::size_t k) const;
};

EigenSystem spectral_decompose(const Operator& m, const Tolerances& tol = kDefaultTolerances);

/// Continuity-ordered decomposition: pairs are matched to `reference` by
/// greedy maximum overlap |<v_k|v_ref>|^2, ties broken by ascending index.
/// Eigenvector phases are aligned so <v_ref|v_k> is real and non-negative.
EigenSystem spectral_decompose(const Operator& m, const EigenSystem& reference,
                               const Tolerances& tol = kDefaultTolerances);

/// Modified Gram-Schmidt on the columns of `vectors`. Columns
/// whose residual norm falls below `drop_tol` are removed.
Operator modified_gram_schmidt(const Operator& vectors, double drop_tol = 1e-12);

}  // namespace qinv
