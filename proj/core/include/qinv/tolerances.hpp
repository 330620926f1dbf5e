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

namespace qinv {

/// Numerical tolerances shared across modules. Relative tolerances are
/// scaled by max(1, max-abs-entry) of the operator under test.
struct Tolerances {
  double hermitian = 1e-12;
  double ortho = 1e-10;
  double eig = 1e-10;
  double degeneracy = 1e-9;
  double trace = 1e-9;
  double psd = 1e-10;
  double dfs = 1e-9;
};

inline const Tolerances kDefaultTolerances{};

}  // namespace qinv
