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

#include "qinv/pauli.hpp"

#include "qinv/errors.hpp"

namespace qinv::pauli {

Operator identity(std::size_t dim) {
  return Operator::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Operator x() {
  Operator m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Operator y() {
  Operator m(2, 2);
  m << 0.0, kI, -kI, 0.0;
  return m;
}

Operator z() {
  Operator m(2, 2);
  m << -1.0, 0.0, 0.0, 1.0;
  return m;
}

Operator on_qubit(const Operator& op, std::size_t k, std::size_t n_qubits) {
  if (k >= n_qubits) throw InvalidInput("on_qubit: qubit index out of range");
  if (op.rows() != 2 || op.cols() != 2) throw InvalidInput("on_qubit: expected a 2x2 operator");
  Operator out = Operator::Identity(1, 1);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    out = tensor_product(out, q == k ? op : identity(2));
  }
  return out;
}

Vector basis_state(std::size_t index, std::size_t dim) {
  if (index >= dim) throw InvalidInput("basis_state: index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

}  // namespace qinv::pauli
