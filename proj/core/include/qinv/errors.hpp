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
#include <stdexcept>
#include <string>

namespace qinv {

/// Input rejected by an operation's precondition check.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical integration drifted outside its quality bounds.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// The model lies outside what the algorithm supports (e.g. a
/// non-diagonalizable Lindblad operator in DFS detection).
class UnsupportedModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A basis split claimed to be decoherence free fails the block structure.
class NotADfs : public std::runtime_error {
 public:
  NotADfs(const std::string& what, double measured)
      : std::runtime_error(what), measured_(measured) {}

  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

/// A schedule vanishes where a solver divides by it.
class SingularSchedule : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qinv
