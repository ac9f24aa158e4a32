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

#include "ztratsim/scenario.hpp"

namespace ztratsim {

/// The defaults data file compiled into the binary (data/defaults.zt).
std::string_view embedded_defaults_text();

/// Built-in scenario sources compiled into the binary; empty view when the
/// name is unknown.
std::string_view embedded_scenario_text(std::string_view name);
std::vector<std::string> builtin_scenario_names();

struct DefaultsParseOutcome {
  std::optional<DefaultData> data;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Parses a data file: [rat], [survival], and [portability] sections only.
/// Unset matrix entries are filled from family rules after explicit entries
/// are applied.
DefaultsParseOutcome parse_default_data(std::string_view text);

/// Loads the active defaults. When ZT_RATSIM_DATA is set, defaults.zt is
/// read from that directory instead of the embedded copy. Throws
/// ConfigError when the override exists but does not parse.
DefaultData load_default_data();

/// Source text for one built-in scenario, honoring a <name>.zt override in
/// ZT_RATSIM_DATA. Throws LookupError for unknown names.
std::string builtin_scenario_source(std::string_view name);

/// Engineering default decay rates per family: RATs with monitoring
/// infrastructure decay slowly, unmonitored ones faster.
std::array<double, kComponentCount> default_decay_rates(RatFamily family);

/// Fills every unset survival entry from family rules: within-RAT and
/// within-family survival dominates, cross-family identity and network
/// survival is zero, context is partially device-local, and policy
/// survival tiers by the target's enforcement capability.
void fill_survival_defaults(SurvivalMatrixSet& matrices,
                            const std::map<std::string, RatProfile>& profiles);

}  // namespace ztratsim
