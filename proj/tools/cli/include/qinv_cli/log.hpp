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

#include <string_view>

namespace qinv::cli {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

/// From QINV_LOG (error, info or debug); unset or unknown means error.
LogLevel log_level_from_env();
void set_log_level(LogLevel level);
void log(LogLevel level, std::string_view message);

}  // namespace qinv::cli
