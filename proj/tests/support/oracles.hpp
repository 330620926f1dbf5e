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

// Independent reference computations for the test suites. Nothing here
// calls the integrators or the block machinery of the library.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace qinv::testing {

using Mat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  /// Hermitian with entries of unit scale.
  Mat hermitian(int dim);
  /// Full-rank density matrix, W W^dag / Tr.
  Mat density(int dim);
  /// Pure state projector.
  Mat pure_state(int dim);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Hand-written Pauli matrices in the library convention, sigma_z = diag(-1, 1).
Mat sx();
Mat sy();
Mat sz();
Mat id(int dim);
Mat kron(const Mat& a, const Mat& b);

struct ConstantModel {
  Mat h;
  std::vector<Mat> f;  // rates already folded in
};

/// Column-stacked superoperator of the state generator.
Mat liouvillian_superop(const ConstantModel& m);
/// Column-stacked superoperator of the invariant generator.
Mat adjoint_superop(const ConstantModel& m);

/// exp(t L) applied to a vectorized operator.
Mat evolve_exact(const Mat& superop, const Mat& x0, double t);

double max_abs(const Mat& m);

/// Plain RK4 for y' = f(t, y) on a real vector, returning all samples.
std::vector<std::vector<double>> rk4_real(
    const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
    std::vector<double> y0, double T, int steps);

/// Least-squares slope of log(values) against times.
double log_slope(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace qinv::testing
