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

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qinv/dfs.hpp"
#include "qinv/operator.hpp"
#include "qinv/schedule.hpp"
#include "qinv/tolerances.hpp"

namespace qinv::cli {

using Json = nlohmann::json;

/// Schema violation at a JSON pointer into the config document.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// {"dim": n, "re": [[...]], "im": [[...]]}, row-major; "im" may be omitted.
Operator matrix_from_json(const Json& j, const std::string& pointer);
Json matrix_to_json(const Operator& m);

/// {"re": [...], "im": [...]}
Vector vector_from_json(const Json& j, const std::string& pointer);
Json vector_to_json(const Vector& v);

/// {"kind": "constant"|"polynomial"|"sinusoid"|"table", ...}; a bare number
/// is read as a constant.
CoefficientSchedule schedule_from_json(const Json& j, const std::string& pointer);
Json schedule_to_json(const CoefficientSchedule& s);

Json decomposition_to_json(const DfsDecomposition& d);

/// Rejects keys outside `allowed`.
void require_known_keys(const Json& j, const std::string& pointer,
                        std::initializer_list<std::string_view> allowed);
double number_at(const Json& j, const std::string& key, const std::string& pointer);

/// 17 significant digits, lowercase scientific notation.
std::string format_double(double v);

/// Serializes with format_double for every floating value; keys sorted.
std::string dump_json(const Json& j);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace qinv::cli
