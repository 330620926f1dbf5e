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

#include "qinv_cli/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace qinv::cli {

namespace {
LogLevel g_level = LogLevel::kError;
}

LogLevel log_level_from_env() {
  const char* v = std::getenv("QINV_LOG");
  if (v == nullptr) return LogLevel::kError;
  const std::string s(v);
  if (s == "debug") return LogLevel::kDebug;
  if (s == "info") return LogLevel::kInfo;
  return LogLevel::kError;
}

void set_log_level(LogLevel level) {
  g_level = level;
}

void log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > static_cast<int>(g_level)) return;
  static constexpr const char* kNames[] = {"error", "info", "debug"};
  std::cerr << "[qinv " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace qinv::cli
