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

#include <complex>

#include <Eigen/Dense>

namespace qinv {

using Complex = std::complex<double>;

/// Dense complex square matrix. Houses Hamiltonians, Lindblad operators,
/// density matrices and invariants alike.
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// AB - BA.
Operator commutator(const Operator& a, const Operator& b);

/// AB + BA.
Operator anticommutator(const Operator& a, const Operator& b);

/// Kronecker product; the left factor is the most significant index
/// (qubit 1 in a multi-qubit register).
Operator tensor_product(const Operator& a, const Operator& b);

/// Largest |entry|.
double max_abs(const Operator& m);

/// max |M - M^dag| entrywise.
double hermitian_deviation(const Operator& m);

/// Hermitian within `tol * max(1, max_abs(m))`.
bool is_hermitian(const Operator& m, double tol);

/// (M + M^dag) / 2.
Operator symmetrize(const Operator& m);

/// Throws InvalidInput unless `m` is square.
void require_square(const Operator& m, const char* what);

/// Throws InvalidInput unless both are square of the same dimension.
void require_same_dim(const Operator& a, const Operator& b, const char* what);

}  // namespace qinv
