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

/// Single-qubit operators and multi-qubit embeddings.
///
/// Sign convention: sigma_z |0> = -|0>, sigma_z |1> = +|1>, i.e.
/// sigma_z = diag(-1, 1), together with sigma_y = [[0, i], [-i, 0]]. This is
/// the textbook Pauli set conjugated by sigma_x, so the usual algebra
/// [sigma_x, sigma_y] = 2i sigma_z (and cyclic) is unchanged. With this
/// choice the collective dephasing operator sigma_z (x) 1 + 1 (x) sigma_z
/// is diag(-2, 0, 0, 2) over |00>, |01>, |10>, |11>.
namespace qinv::pauli {

Operator identity(std::size_t dim);
Operator x();
Operator y();
Operator z();

/// `op` acting on qubit `k` (0-based, qubit 0 leftmost) of an n-qubit register.
Operator on_qubit(const Operator& op, std::size_t k, std::size_t n_qubits);

/// Unit vector e_index; for qubit registers index 1 of dim 4 is |01>.
Vector basis_state(std::size_t index, std::size_t dim);

}  // namespace qinv::pauli
