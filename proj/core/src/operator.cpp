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

#include "qinv/operator.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "qinv/errors.hpp"

namespace qinv {

void require_square(const Operator& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidInput(std::string(what) + ": operator must be square and non-empty, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a.rows()) +
                       " vs " + std::to_string(b.rows()) + ")");
  }
}

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Operator anticommutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

Operator tensor_product(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs(const Operator& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_deviation(const Operator& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

bool is_hermitian(const Operator& m, double tol) {
  return hermitian_deviation(m) <= tol * std::max(1.0, max_abs(m));
}

Operator symmetrize(const Operator& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace qinv
