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
#include "qinv/schedule.hpp"
#include "qinv/tolerances.hpp"
#include "qinv/trajectory.hpp"

namespace qinv {

struct HamiltonianTerm {
  Operator op;  // Hermitian
  CoefficientSchedule coefficient;
};

/// Lindblad channel with effective operator sqrt(rate(t)) * op.
struct Dissipator {
  Operator op;
  CoefficientSchedule rate;
};

/// Markovian open system
///   drho/dt = -i[H(t), rho] + sum_a (F_a rho F_a^dag - 1/2 {F_a^dag F_a, rho})
/// with H(t) = sum_i c_i(t) H_i and F_a(t) = sqrt(rate_a(t)) F_a.
class LindbladModel {
 public:
  LindbladModel(std::size_t dim, std::vector<HamiltonianTerm> terms,
                std::vector<Dissipator> dissipators, const Tolerances& tol = kDefaultTolerances);

  std::size_t dim() const { return dim_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const std::vector<Dissipator>& dissipators() const { return dissipators_; }

  Operator hamiltonian(double t) const;
  /// rate_a(t); throws InvalidInput if negative.
  double rate(std::size_t a, double t) const;
  /// sqrt(rate_a(t)) F_a
  Operator lindblad_operator(std::size_t a, double t) const;

  /// Same Hamiltonian, no dissipators.
  LindbladModel closed() const;

 private:
  std::size_t dim_;
  std::vector<HamiltonianTerm> terms_;
  std::vector<Dissipator> dissipators_;
};

/// Right-hand side of the master equation.
Operator apply_liouvillian(const LindbladModel& m, const Operator& rho, double t);

/// dI/dt that keeps Tr(I rho) constant:
///   -i[H, I] - sum_a (F_a^dag I F_a - 1/2 {F_a^dag F_a, I}).
Operator apply_adjoint_generator(const LindbladModel& m, const Operator& invariant, double t,
                                 const Tolerances& tol = kDefaultTolerances);

/// Fixed-step RK4 on the master equation. Each step is re-symmetrized; the
/// trace is never renormalized. Throws IntegrationError when the trace
/// drifts beyond tol.trace or an eigenvalue drops below -tol.psd.
StateTrajectory propagate_state(const LindbladModel& m, const Operator& rho0, const TimeGrid& grid,
                                const Tolerances& tol = kDefaultTolerances);

/// Fixed-step RK4 on the adjoint generator, re-symmetrized each step.
InvariantTrajectory propagate_invariant(const LindbladModel& m, const Operator& invariant0,
                                        const TimeGrid& grid,
                                        const Tolerances& tol = kDefaultTolerances);

/// Per interior sample: max-abs entry of  dI_fd/dt - (adjoint generator)(I),
/// where dI_fd/dt is the central difference. Needs >= 3 uniform samples.
std::vector<double> invariant_residual(const LindbladModel& m, const InvariantTrajectory& traj);

struct ExpectationSeries {
  std::vector<double> values;  // Re Tr(I(t_k) rho(t_k))
  double defect = 0.0;         // max_k |values[k] - values[0]|
};

ExpectationSeries expectation_series(const InvariantTrajectory& itraj,
                                     const StateTrajectory& straj);

struct EigenFlowRecord {
  double time = 0.0;
  std::size_t index = 0;
  double lambda = 0.0;
  double rhs = 0.0;  // predicted d(lambda)/dt
  double fd = 0.0;   // central difference of the tracked eigenvalue
  double defect = 0.0;
  bool degenerate = false;
};

/// Eigenvalue flow along a trajectory: compares
///   sum_a <psi|(lambda F_a^dag F_a - F_a^dag I F_a)|psi>
/// with the central difference of each continuity-tracked eigenvalue.
/// Eigenvalues closer than tol.degeneracy * ||I|| to a neighbour are flagged.
std::vector<EigenFlowRecord> eigenflow(const LindbladModel& m, const InvariantTrajectory& traj,
                                       const Tolerances& tol = kDefaultTolerances);

}  // namespace qinv
