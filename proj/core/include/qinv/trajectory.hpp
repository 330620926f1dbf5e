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
#include "qinv/spectral.hpp"
#include "qinv/tolerances.hpp"

namespace qinv {

/// Uniform grid t_k = k T / steps, k = 0..steps.
struct TimeGrid {
  double T = 2.0;
  std::size_t steps = 4000;

  double dt() const { return T / static_cast<double>(steps); }
  double time(std::size_t k) const {
    return T * static_cast<double>(k) / static_cast<double>(steps);
  }
  std::vector<double> times() const;
  /// Throws InvalidInput unless T > 0 and steps >= 1.
  void validate() const;
};

/// Classical fourth-order Runge-Kutta step for y' = f(t, y).
template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct StepDiagnostics {
  double trace_deviation = 0.0;
  double hermitian_deviation = 0.0;  // before re-symmetrization
  double min_eigenvalue = 0.0;
};

struct StateTrajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  std::vector<StepDiagnostics> diagnostics;

  std::size_t size() const { return times.size(); }
};

/// Sampled Hermitian invariant together with continuity-ordered
/// eigensystems (step k uses step k-1 as reference).
class InvariantTrajectory {
 public:
  InvariantTrajectory() = default;

  /// Builds eigensystems for externally produced samples (e.g. a closed
  /// form evaluated on a grid). Samples must be Hermitian.
  static InvariantTrajectory from_samples(std::vector<double> times,
                                          std::vector<Operator> invariants,
                                          const Tolerances& tol = kDefaultTolerances);

  std::size_t size() const { return times_.size(); }
  std::size_t dim() const {
    return invariants_.empty() ? 0 : static_cast<std::size_t>(invariants_.front().rows());
  }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Operator>& invariants() const { return invariants_; }
  const std::vector<EigenSystem>& eigensystems() const { return eigensystems_; }
  const Operator& at(std::size_t k) const { return invariants_.at(k); }

  /// Spacing of a uniform grid; throws InvalidInput if the grid is not
  /// uniform or has fewer than `min_samples` points.
  double uniform_dt(std::size_t min_samples = 2) const;

 private:
  std::vector<double> times_;
  std::vector<Operator> invariants_;
  std::vector<EigenSystem> eigensystems_;
};

/// Uniform spacing of `times`, or InvalidInput.
double uniform_spacing(const std::vector<double>& times, std::size_t min_samples);

}  // namespace qinv
