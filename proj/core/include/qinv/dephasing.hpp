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

#include "qinv/dfs.hpp"
#include "qinv/lindblad.hpp"
#include "qinv/schedule.hpp"
#include "qinv/trajectory.hpp"

/// Collective dephasing of qubits under an XY interaction and a uniform
/// field, with the closed-form two-qubit block invariants.
///
/// Two coefficient conventions appear here. `BlochCoefficients` expands a
/// 2x2 block over this library's Pauli set (see pauli.hpp). The closed-form
/// solutions (analytic_ID, analytic_IC, analytic_eigs) are written in the
/// "reference" convention where the same matrix reads
///   [[z, x + i y], [x - i y, -z]],
/// which differs only in the sign of z. Use to_reference()/from_reference()
/// to move between them.
namespace qinv::dephasing {

struct BlochCoefficients {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  /// x sigma_x + y sigma_y + z sigma_z with the library Pauli matrices.
  Operator to_operator() const;
  /// Traceless part of a 2x2 operator.
  static BlochCoefficients from_operator(const Operator& m);

  BlochCoefficients to_reference() const { return {x, y, -z}; }
  static BlochCoefficients from_reference(const BlochCoefficients& r) { return {r.x, r.y, -r.z}; }

  double norm() const;
};

/// Initial block invariants are given in the reference convention.
struct DephasingScenario {
  CoefficientSchedule g12 = CoefficientSchedule::constant(1.0);
  CoefficientSchedule bz = CoefficientSchedule::constant(1.0);
  double gamma = 0.05;
  BlochCoefficients id0{0.0, 0.0, 1.0};
  BlochCoefficients ic0{1.0, 0.0, 0.0};
  TimeGrid grid{2.0, 8000};

  /// The shipped demo profile: g = 1, B = 1, gamma = 0.05, T = 2.
  static DephasingScenario demo();
  void validate() const;
};

/// n-qubit model: H = g(t) sum_{i<j} (sx_i sx_j + sy_i sy_j)/2 + B(t) sum_i sz_i/2,
/// single Lindblad operator F = sum_i sz_i with rate gamma.
LindbladModel build_collective_model(std::size_t n_qubits, const CoefficientSchedule& g12,
                                     const CoefficientSchedule& bz, double gamma);

struct TwoQubitModel {
  LindbladModel model;
  /// DFS {|01>, |10>}, complement {|00>, |11>}, c = 0, blocks at t = 0.
  DfsDecomposition decomposition;
};

TwoQubitModel build_two_qubit_model(const DephasingScenario& s);

/// x = x0, y = y0 cos 2L + z0 sin 2L, z = z0 cos 2L - y0 sin 2L with
/// L(t) = int_0^t g. Reference convention.
BlochCoefficients analytic_ID(const DephasingScenario& s, double t);

/// x = (x0 cos 2Th - y0 sin 2Th) e^{8 gamma t}, y = (y0 cos 2Th + x0 sin 2Th) e^{8 gamma t},
/// z = z0 with Th(t) = int_0^t B. Reference convention.
BlochCoefficients analytic_IC(const DephasingScenario& s, double t);

/// lambda_+-^C(t) = +-sqrt((x0^2 + y0^2) e^{16 gamma t} + z0^2)
double analytic_IC_eigenvalue(const DephasingScenario& s, double t);

struct AnalyticEigen {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  Vector psi_plus;
  Vector psi_minus;
};

/// Eigenpairs of [[z, x+iy], [x-iy, -z]] (reference convention):
/// psi = (lambda + z, x - i y) / sqrt(2 lambda (lambda + z)), switching to
/// (x + i y, lambda - z) / sqrt(2 lambda (lambda - z)) when that
/// denominator is larger. Throws InvalidInput for the zero vector.
AnalyticEigen analytic_eigs(const BlochCoefficients& c);

struct SampledFunction {
  std::vector<double> times;
  std::vector<double> values;
};

struct RiccatiSolution {
  SampledFunction z;
  double amplitude = 0.0;  // R in z = R cos(2 L(t) + A)
  double phase = 0.0;      // A
};

/// Solves z'' - (g'/g) z' + 4 g^2 z = 0 through u = -z'/(g z), whose Riccati
/// equation u' = g (u^2 + 4) integrates to u = 2 tan(2 L(t) + A). Throws
/// SingularSchedule when |g| < 1e-8 somewhere on the grid.
RiccatiSolution riccati_solve_second_order(const CoefficientSchedule& g, double z0, double zdot0,
                                           const TimeGrid& grid);

/// Pointwise residual |z'' - (g'/g) z' + 4 g^2 z| of a sampled solution,
/// by central differences, at interior samples.
std::vector<double> second_order_residual(const CoefficientSchedule& g, const SampledFunction& z);

struct ComparisonSample {
  double t = 0.0;
  BlochCoefficients id_numeric;  // reference convention
  BlochCoefficients id_analytic;
  BlochCoefficients ic_numeric;
  BlochCoefficients ic_analytic;
};

struct DephasingReport {
  double id_max_deviation = 0.0;           // componentwise, absolute
  double ic_max_deviation = 0.0;           // componentwise, absolute
  double ic_max_relative_deviation = 0.0;  // componentwise / |analytic vector|
  double id_eigenvalue_deviation = 0.0;    // vs +-|I^D(0)|, numeric spectrum
  double ic_eigenvalue_relative_deviation = 0.0;  // numeric vs lambda^C(t)
  double ic_eigenvalue_drift = 0.0;        // max |lambda^C(t) - lambda^C(0)|
  double zc_drift = 0.0;
  double fitted_growth_rate = 0.0;         // log-linear fit of sqrt(x^2 + y^2)
  double expected_growth_rate = 0.0;       // 8 gamma
  std::vector<ComparisonSample> samples;
};

/// Propagates both blocks numerically and compares with the closed forms
/// on the scenario grid.
DephasingReport compare_analytic_numeric(const DephasingScenario& s);

}  // namespace qinv::dephasing
