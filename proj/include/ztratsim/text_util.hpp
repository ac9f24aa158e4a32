// Copyright 2026 The ztratsim Authors
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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ztratsim {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_ws(std::string_view s);

/// Strict double parse: the whole token must be consumed.
std::optional<double> parse_double(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);

/// Shortest decimal form that parses back to the same double. Used by the
/// canonical scenario emitter so emission is a fixed point under re-parse.
std::string format_double_shortest(double value);

/// Fixed six-decimal form used by the timeline CSV.
std::string format_double_fixed6(double value);

}  // namespace ztratsim
