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

#include "qinv/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qinv/errors.hpp"

namespace qinv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// RK4 stages land on t = T up to a few ulps.
double horizon_slack(double horizon) {
  return 1e-12 * std::max(1.0, std::isfinite(horizon) ? horizon : 1.0);
}

double table_eval(const CoefficientSchedule::Table& tab, double t) {
  const auto& ts = tab.times;
  if (t <= ts.front()) return tab.values.front();
  if (t >= ts.back()) return tab.values.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const auto hi = static_cast<std::size_t>(it - ts.begin());
  const auto lo = hi - 1;
  const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return (1.0 - w) * tab.values[lo] + w * tab.values[hi];
}

double table_integral(const CoefficientSchedule::Table& tab, double t) {
  const auto& ts = tab.times;
  double acc = 0.0;
  for (std::size_t k = 1; k < ts.size(); ++k) {
    if (t <= ts[k - 1]) break;
    const double right = std::min(t, ts[k]);
    const double v_right = right == ts[k] ? tab.values[k] : table_eval(tab, right);
    acc += 0.5 * (tab.values[k - 1] + v_right) * (right - ts[k - 1]);
  }
  return acc;
}

}  // namespace

CoefficientSchedule::CoefficientSchedule(Kind kind, double horizon)
    : kind_(std::move(kind)), horizon_(horizon) {
  if (!(horizon_ > 0.0)) throw InvalidInput("schedule: horizon must be positive");
}

CoefficientSchedule CoefficientSchedule::constant(double value, double horizon) {
  if (!std::isfinite(value)) throw InvalidInput("schedule: constant must be finite");
  return {Constant{value}, horizon};
}

CoefficientSchedule CoefficientSchedule::polynomial(std::vector<double> coefficients,
                                                    double horizon) {
  if (coefficients.empty()) throw InvalidInput("schedule: polynomial needs coefficients");
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw InvalidInput("schedule: polynomial coefficient not finite");
  }
  return {Polynomial{std::move(coefficients)}, horizon};
}

CoefficientSchedule CoefficientSchedule::sinusoid(double amplitude, double omega, double phase,
                                                  double offset, double horizon) {
  if (!std::isfinite(amplitude) || !std::isfinite(omega) || !std::isfinite(phase) ||
      !std::isfinite(offset)) {
    throw InvalidInput("schedule: sinusoid parameters must be finite");
  }
  return {Sinusoid{amplitude, omega, phase, offset}, horizon};
}

CoefficientSchedule CoefficientSchedule::table(std::vector<double> times,
                                               std::vector<double> values) {
  if (times.size() < 2 || times.size() != values.size()) {
    throw InvalidInput("schedule: table needs >= 2 knots with matching values");
  }
  if (times.front() != 0.0) throw InvalidInput("schedule: table must start at t = 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw InvalidInput("schedule: table knots must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidInput("schedule: table value not finite");
  }
  const double horizon = times.back();
  return {Table{std::move(times), std::move(values)}, horizon};
}

CoefficientSchedule CoefficientSchedule::with_horizon(double horizon) const {
  if (std::holds_alternative<Table>(kind_)) return *this;
  return {kind_, horizon};
}

std::string_view CoefficientSchedule::kind_name() const {
  return std::visit(Overloaded{[](const Constant&) { return std::string_view("constant"); },
                               [](const Polynomial&) { return std::string_view("polynomial"); },
                               [](const Sinusoid&) { return std::string_view("sinusoid"); },
                               [](const Table&) { return std::string_view("table"); }},
                    kind_);
}

void CoefficientSchedule::check_time(double t, const char* op) const {
  if (!std::isfinite(t) || t < -horizon_slack(horizon_) || t > horizon_ + horizon_slack(horizon_)) {
    throw InvalidInput(std::string("schedule ") + op + ": t = " + std::to_string(t) +
                       " outside horizon [0, " + std::to_string(horizon_) + "]");
  }
}

double CoefficientSchedule::eval(double t) const {
  check_time(t, "eval");
  return std::visit(
      Overloaded{[](const Constant& c) { return c.value; },
                 [t](const Polynomial& p) {
                   double acc = 0.0;
                   for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
                     acc = acc * t + *it;
                   }
                   return acc;
                 },
                 [t](const Sinusoid& s) {
                   return s.offset + s.amplitude * std::sin(s.omega * t + s.phase);
                 },
                 [t](const Table& tab) { return table_eval(tab, t); }},
      kind_);
}

double CoefficientSchedule::integral(double t) const {
  check_time(t, "integral");
  if (t == 0.0) return 0.0;
  return std::visit(
      Overloaded{[t](const Constant& c) { return c.value * t; },
                 [t](const Polynomial& p) {
                   double acc = 0.0;
                   for (std::size_t k = p.coefficients.size(); k-- > 0;) {
                     acc = acc * t + p.coefficients[k] / static_cast<double>(k + 1);
                   }
                   return acc * t;
                 },
                 [t](const Sinusoid& s) {
                   const double periodic =
                       s.omega != 0.0
                           ? s.amplitude * (std::cos(s.phase) - std::cos(s.omega * t + s.phase)) /
                                 s.omega
                           : s.amplitude * std::sin(s.phase) * t;
                   return s.offset * t + periodic;
                 },
                 [t](const Table& tab) { return table_integral(tab, t); }},
      kind_);
}

double CoefficientSchedule::derivative(double t) const {
  check_time(t, "derivative");
  return std::visit(
      Overloaded{[](const Constant&) { return 0.0; },
                 [t](const Polynomial& p) {
                   double acc = 0.0;
                   for (std::size_t k = p.coefficients.size(); k-- > 1;) {
                     acc = acc * t + static_cast<double>(k) * p.coefficients[k];
                   }
                   return acc;
                 },
                 [t](const Sinusoid& s) {
                   return s.amplitude * s.omega * std::cos(s.omega * t + s.phase);
                 },
                 [this, t](const Table& tab) {
                   if (std::binary_search(tab.times.begin(), tab.times.end(), t)) {
                     throw InvalidInput("schedule derivative: t = " + std::to_string(t) +
                                        " is a table knot (one-sided derivatives differ)");
                   }
                   const double h = 1e-6 * horizon_;
                   const double lo = std::max(0.0, t - h);
                   const double hi = std::min(horizon_, t + h);
                   return (table_eval(tab, hi) - table_eval(tab, lo)) / (hi - lo);
                 }},
      kind_);
}

}  // namespace qinv
