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

#include <limits>
#include <string_view>
#include <variant>
#include <vector>

namespace qinv {

/// Time-dependent real coefficient on a horizon [0, T].
///
/// Constant, polynomial and sinusoid kinds evaluate, integrate and
/// differentiate in closed form. Sampled tables interpolate linearly,
/// integrate by the trapezoid rule on their knots and differentiate by a
/// central difference with h = 1e-6 T.
class CoefficientSchedule {
 public:
  struct Constant {
    double value = 0.0;
  };
  /// sum_k coefficients[k] t^k
  struct Polynomial {
    std::vector<double> coefficients;
  };
  /// offset + amplitude sin(omega t + phase)
  struct Sinusoid {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    double offset = 0.0;
  };
  /// Strictly increasing knots starting at t = 0; the horizon is the last knot.
  struct Table {
    std::vector<double> times;
    std::vector<double> values;
  };
  using Kind = std::variant<Constant, Polynomial, Sinusoid, Table>;

  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  static CoefficientSchedule constant(double value, double horizon = kUnbounded);
  static CoefficientSchedule polynomial(std::vector<double> coefficients,
                                        double horizon = kUnbounded);
  static CoefficientSchedule sinusoid(double amplitude, double omega, double phase = 0.0,
                                      double offset = 0.0, double horizon = kUnbounded);
  static CoefficientSchedule table(std::vector<double> times, std::vector<double> values);

  double eval(double t) const;
  /// Integral from 0 to t.
  double integral(double t) const;
  double derivative(double t) const;

  double horizon() const { return horizon_; }
  /// Copy with a tighter horizon (tables keep their own).
  CoefficientSchedule with_horizon(double horizon) const;

  const Kind& kind() const { return kind_; }
  std::string_view kind_name() const;

 private:
  CoefficientSchedule(Kind kind, double horizon);
  void check_time(double t, const char* op) const;

  Kind kind_;
  double horizon_;
};

}  // namespace qinv
