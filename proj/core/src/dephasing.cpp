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

#include "qinv/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "qinv/block_invariants.hpp"
#include "qinv/errors.hpp"
#include "qinv/pauli.hpp"

namespace qinv::dephasing {

namespace {

// Integral of a schedule in extended precision. Samples of the Riccati
// solution are then correctly rounded, which keeps finite-difference
// residual checks at fine steps above the rounding floor.
long double integral_extended(const CoefficientSchedule& s, long double t) {
  return std::visit(
      [t](const auto& k) -> long double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CoefficientSchedule::Constant>) {
          return static_cast<long double>(k.value) * t;
        } else if constexpr (std::is_same_v<K, CoefficientSchedule::Polynomial>) {
          long double acc = 0.0L;
          for (std::size_t i = k.coefficients.size(); i-- > 0;) {
            acc = acc * t + static_cast<long double>(k.coefficients[i]) / static_cast<long double>(i + 1);
          }
          return acc * t;
        } else if constexpr (std::is_same_v<K, CoefficientSchedule::Sinusoid>) {
          const long double amp = k.amplitude, w = k.omega, ph = k.phase, off = k.offset;
          if (w == 0.0L) return (off + amp * std::sin(ph)) * t;
          return off * t + amp * (std::cos(ph) - std::cos(w * t + ph)) / w;
        } else {
          long double acc = 0.0L;
          for (std::size_t i = 0; i + 1 < k.times.size(); ++i) {
            const long double a = k.times[i], b = k.times[i + 1];
            if (t <= a) break;
            const long double fa = k.values[i], fb = k.values[i + 1];
            const long double e = std::min(t, b);
            const long double fe = fa + (fb - fa) * (e - a) / (b - a);
            acc += 0.5L * (fa + fe) * (e - a);
          }
          return acc;
        }
      },
      s.kind());
}

}  // namespace

Operator BlochCoefficients::to_operator() const {
  return x * pauli::x() + y * pauli::y() + z * pauli::z();
}

BlochCoefficients BlochCoefficients::from_operator(const Operator& m) {
  if (m.rows() != 2 || m.cols() != 2) throw InvalidInput("BlochCoefficients: expected a 2x2 operator");
  return {0.5 * (pauli::x() * m).trace().real(), 0.5 * (pauli::y() * m).trace().real(),
          0.5 * (pauli::z() * m).trace().real()};
}

double BlochCoefficients::norm() const {
  return std::sqrt(x * x + y * y + z * z);
}

DephasingScenario DephasingScenario::demo() {
  return DephasingScenario{};
}

void DephasingScenario::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidInput("scenario: gamma must be >= 0");
  grid.validate();
  if (g12.horizon() < grid.T || bz.horizon() < grid.T) {
    throw InvalidInput("scenario: schedules must cover [0, T]");
  }
}

LindbladModel build_collective_model(std::size_t n_qubits, const CoefficientSchedule& g12,
                                     const CoefficientSchedule& bz, double gamma) {
  if (n_qubits == 0) throw InvalidInput("build_collective_model: need at least one qubit");
  if (!(gamma >= 0.0)) throw InvalidInput("build_collective_model: gamma must be >= 0");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const auto d = static_cast<Eigen::Index>(dim);
  Operator xy = Operator::Zero(d, d);
  for (std::size_t i = 0; i < n_qubits; ++i) {
    for (std::size_t j = i + 1; j < n_qubits; ++j) {
      xy += 0.5 * (pauli::on_qubit(pauli::x(), i, n_qubits) * pauli::on_qubit(pauli::x(), j, n_qubits) +
                   pauli::on_qubit(pauli::y(), i, n_qubits) * pauli::on_qubit(pauli::y(), j, n_qubits));
    }
  }
  Operator zsum = Operator::Zero(d, d);
  for (std::size_t i = 0; i < n_qubits; ++i) zsum += pauli::on_qubit(pauli::z(), i, n_qubits);

  std::vector<HamiltonianTerm> terms;
  if (n_qubits > 1) terms.push_back({xy, g12});
  terms.push_back({0.5 * zsum, bz});
  std::vector<Dissipator> dissipators{{zsum, CoefficientSchedule::constant(gamma)}};
  return LindbladModel(dim, std::move(terms), std::move(dissipators));
}

TwoQubitModel build_two_qubit_model(const DephasingScenario& s) {
  s.validate();
  LindbladModel model = build_collective_model(2, s.g12, s.bz, s.gamma);
  Operator dfs(4, 2);
  dfs << pauli::basis_state(1, 4), pauli::basis_state(2, 4);
  Operator comp(4, 2);
  comp << pauli::basis_state(0, 4), pauli::basis_state(3, 4);
  DfsDecomposition d(SubspaceBasis(dfs), SubspaceBasis(comp), {Complex(0.0, 0.0)});
  DfsDecomposition filled = block_decompose(model, d, Operator::Zero(4, 4), 0.0);
  const Operator heff = compute_Heff(model, filled, Operator::Zero(4, 4), 0.0);
  filled.heff_residual = dfs_condition_residual(heff, filled);
  filled.heff_invariant = filled.heff_residual <= kDefaultTolerances.dfs;
  return {std::move(model), std::move(filled)};
}

BlochCoefficients analytic_ID(const DephasingScenario& s, double t) {
  const double angle = 2.0 * s.g12.integral(t);
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  const auto& v = s.id0;
  return {v.x, v.y * c + v.z * sn, v.z * c - v.y * sn};
}

BlochCoefficients analytic_IC(const DephasingScenario& s, double t) {
  const double angle = 2.0 * s.bz.integral(t);
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  const double growth = std::exp(8.0 * s.gamma * t);
  const auto& v = s.ic0;
  return {(v.x * c - v.y * sn) * growth, (v.y * c + v.x * sn) * growth, v.z};
}

double analytic_IC_eigenvalue(const DephasingScenario& s, double t) {
  const auto& v = s.ic0;
  return std::sqrt((v.x * v.x + v.y * v.y) * std::exp(16.0 * s.gamma * t) + v.z * v.z);
}

AnalyticEigen analytic_eigs(const BlochCoefficients& c) {
  const double r = c.norm();
  if (r == 0.0) throw InvalidInput("analytic_eigs: zero operator has no distinguished eigenvectors");
  const auto eigenvector = [&](double lambda) {
    const double p_direct = 2.0 * lambda * (lambda + c.z);
    const double p_alternate = 2.0 * lambda * (lambda - c.z);
    Vector v(2);
    if (p_direct >= p_alternate) {
      v << Complex(lambda + c.z, 0.0), Complex(c.x, -c.y);
      return Vector(v / std::sqrt(p_direct));
    }
    v << Complex(c.x, c.y), Complex(lambda - c.z, 0.0);
    return Vector(v / std::sqrt(p_alternate));
  };
  return {r, -r, eigenvector(r), eigenvector(-r)};
}

RiccatiSolution riccati_solve_second_order(const CoefficientSchedule& g, double z0, double zdot0,
                                           const TimeGrid& grid) {
  grid.validate();
  constexpr double kGMin = 1e-8;
  RiccatiSolution out;
  out.z.times = grid.times();
  for (double t : out.z.times) {
    if (std::abs(g.eval(t)) < kGMin) {
      throw SingularSchedule("riccati_solve_second_order: |g| < 1e-8 at t = " + std::to_string(t));
    }
  }
  // z = R cos(2L + A) with R cos A = z(0), R sin A = y(0) = -z'(0) / (2 g(0));
  // then u = -z'/(g z) = 2 tan(2L + A) satisfies u' = g (u^2 + 4).
  const double y0 = -zdot0 / (2.0 * g.eval(0.0));
  out.amplitude = std::hypot(z0, y0);
  out.phase = out.amplitude > 0.0 ? std::atan2(y0, z0) : 0.0;
  out.z.values.reserve(out.z.times.size());
  const long double amp = out.amplitude;
  const long double phase = out.phase;
  for (std::size_t k = 0; k <= grid.steps; ++k) {
    const long double t = static_cast<long double>(grid.T) * static_cast<long double>(k) /
                          static_cast<long double>(grid.steps);
    out.z.values.push_back(
        amp == 0.0L ? 0.0 : static_cast<double>(amp * std::cos(2.0L * integral_extended(g, t) + phase)));
  }
  return out;
}

std::vector<double> second_order_residual(const CoefficientSchedule& g, const SampledFunction& z) {
  const double h = uniform_spacing(z.times, 3);
  std::vector<double> out;
  out.reserve(z.times.size() - 2);
  for (std::size_t k = 1; k + 1 < z.times.size(); ++k) {
    const double t = z.times[k];
    const long double zm = z.values[k - 1], z0 = z.values[k], zp1 = z.values[k + 1];
    const long double hh = h;
    const long double zpp = (zp1 - 2.0L * z0 + zm) / (hh * hh);
    const long double zp = (zp1 - zm) / (2.0L * hh);
    const long double gt = g.eval(t);
    const long double gd = g.derivative(t);
    out.push_back(static_cast<double>(std::abs(zpp - (gd / gt) * zp + 4.0L * gt * gt * z0)));
  }
  return out;
}

DephasingReport compare_analytic_numeric(const DephasingScenario& s) {
  const TwoQubitModel tq = build_two_qubit_model(s);
  const BlockSchedule blocks = static_block_schedule(tq.model, tq.decomposition);
  const Operator id0 = BlochCoefficients::from_reference(s.id0).to_operator();
  const Operator ic0 = BlochCoefficients::from_reference(s.ic0).to_operator();
  const InvariantTrajectory id_traj = propagate_ID(blocks, id0, s.grid);
  const InvariantTrajectory ic_traj = propagate_IC(blocks, id_traj, ic0, s.grid);

  DephasingReport rep;
  rep.expected_growth_rate = 8.0 * s.gamma;
  const double id_radius = s.id0.norm();
  const auto component_dev = [](const BlochCoefficients& a, const BlochCoefficients& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
  };

  double sum_t = 0.0, sum_l = 0.0, sum_tt = 0.0, sum_tl = 0.0;
  std::size_t fit_count = 0;
  const auto& ic_eigs0 = ic_traj.eigensystems().front();
  for (std::size_t k = 0; k < id_traj.size(); ++k) {
    const double t = id_traj.times()[k];
    ComparisonSample sample;
    sample.t = t;
    sample.id_numeric = BlochCoefficients::from_operator(id_traj.at(k)).to_reference();
    sample.id_analytic = analytic_ID(s, t);
    sample.ic_numeric = BlochCoefficients::from_operator(ic_traj.at(k)).to_reference();
    sample.ic_analytic = analytic_IC(s, t);

    rep.id_max_deviation = std::max(rep.id_max_deviation, component_dev(sample.id_numeric, sample.id_analytic));
    const double ic_dev = component_dev(sample.ic_numeric, sample.ic_analytic);
    rep.ic_max_deviation = std::max(rep.ic_max_deviation, ic_dev);
    const double ic_scale = sample.ic_analytic.norm();
    if (ic_scale > 0.0) {
      rep.ic_max_relative_deviation = std::max(rep.ic_max_relative_deviation, ic_dev / ic_scale);
    }

    auto id_vals = id_traj.eigensystems()[k].values;
    std::sort(id_vals.begin(), id_vals.end());
    rep.id_eigenvalue_deviation = std::max(
        {rep.id_eigenvalue_deviation, std::abs(id_vals[0] + id_radius), std::abs(id_vals[1] - id_radius)});

    auto ic_vals = ic_traj.eigensystems()[k].values;
    std::sort(ic_vals.begin(), ic_vals.end());
    const double lambda_c = analytic_IC_eigenvalue(s, t);
    if (lambda_c > 0.0) {
      rep.ic_eigenvalue_relative_deviation =
          std::max({rep.ic_eigenvalue_relative_deviation, std::abs(ic_vals[0] + lambda_c) / lambda_c,
                    std::abs(ic_vals[1] - lambda_c) / lambda_c});
    }
    for (std::size_t j = 0; j < ic_vals.size(); ++j) {
      rep.ic_eigenvalue_drift =
          std::max(rep.ic_eigenvalue_drift, std::abs(ic_traj.eigensystems()[k].values[j] - ic_eigs0.values[j]));
    }
    rep.zc_drift = std::max(rep.zc_drift, std::abs(sample.ic_numeric.z - s.ic0.z));

    const double planar = std::hypot(sample.ic_numeric.x, sample.ic_numeric.y);
    if (planar > 0.0) {
      const double l = std::log(planar);
      sum_t += t;
      sum_l += l;
      sum_tt += t * t;
      sum_tl += t * l;
      ++fit_count;
    }
    rep.samples.push_back(sample);
  }
  if (fit_count >= 2) {
    const double n = static_cast<double>(fit_count);
    rep.fitted_growth_rate = (n * sum_tl - sum_t * sum_l) / (n * sum_tt - sum_t * sum_t);
  }
  return rep;
}

}  // namespace qinv::dephasing
