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

#include "ztratsim/mission.hpp"
#include "ztratsim/scenario.hpp"

namespace ztratsim {

/// Timeline CSV. Columns, in order: t_s, event, active_rats
/// (semicolon-joined), s_id, s_dev, s_ctx, s_net, s_pol, composite,
/// energy_cum_mJ, below_threshold. Header row mandatory; floats printed
/// with six decimal places. Byte-stable for a fixed scenario and seed.
std::string emit_timeline(const Timeline& timeline);

std::string emit_report_text(const MissionReport& report);
std::string emit_report_json(const MissionReport& report);

/// Active survival matrices in scenario-file form, restricted to one
/// component when given.
std::string emit_matrices(const SurvivalMatrixSet& matrices,
                          std::optional<TrustComponent> only = std::nullopt);

}  // namespace ztratsim
