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

#include "qinv/trajectory.hpp"

#include <cmath>
#include <string>

#include "qinv/errors.hpp"

namespace qinv {

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out[k] = time(k);
  return out;
}

void TimeGrid::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("grid: T must be positive and finite");
  if (steps == 0) throw InvalidInput("grid: steps must be >= 1");
}

double uniform_spacing(const std::vector<double>& times, std::size_t min_samples) {
  if (times.size() < min_samples) {
    throw InvalidInput("trajectory: need at least " + std::to_string(min_samples) +
                       " samples, got " + std::to_string(times.size()));
  }
  if (times.size() < 2) return 0.0;
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw InvalidInput("trajectory: times must increase");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs((times[k] - times[k - 1]) - dt) > 1e-9 * dt) {
      throw InvalidInput("trajectory: time grid is not uniform");
    }
  }
  return dt;
}

InvariantTrajectory InvariantTrajectory::from_samples(std::vector<double> times,
                                                      std::vector<Operator> invariants,
                                                      const Tolerances& tol) {
  if (times.size() != invariants.size()) {
    throw InvalidInput("trajectory: times and samples differ in length");
  }
  InvariantTrajectory out;
  out.eigensystems_.reserve(invariants.size());
  for (std::size_t k = 0; k < invariants.size(); ++k) {
    if (k > 0 && invariants[k].rows() != invariants[0].rows()) {
      throw InvalidInput("trajectory: samples differ in dimension");
    }
    out.eigensystems_.push_back(k == 0 ? spectral_decompose(invariants[k], tol)
                                       : spectral_decompose(invariants[k],
                                                            out.eigensystems_.back(), tol));
  }
  out.times_ = std::move(times);
  out.invariants_ = std::move(invariants);
  return out;
}

double InvariantTrajectory::uniform_dt(std::size_t min_samples) const {
  return uniform_spacing(times_, min_samples);
}

}  // namespace qinv
