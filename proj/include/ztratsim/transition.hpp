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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ztratsim/trust_core.hpp"

namespace ztratsim {

/// How a RAT transition came about. The kind scales the recovery cost and
/// selects the trust-gap model.
enum class TransitionKind : std::uint8_t {
  Planned = 0,
  CoverageDriven = 1,
  Opportunistic = 2,
  AdversaryForced = 3,
};

inline constexpr std::size_t kTransitionKindCount = 4;

/// Cost multiplier alpha: planned 1.0, coverage-driven 1.3,
/// opportunistic 0.8, adversary-forced 2.0.
double cost_multiplier(TransitionKind kind);

std::string_view kind_name(TransitionKind kind);  // "planned", "coverage", ...
std::optional<TransitionKind> kind_from(std::string_view name);

/// One survival matrix per trust component over the registered RAT set.
/// sigma(j, from, to) is the fraction of component j that persists across
/// the from->to crossing. Entries default to unset; loaders are expected to
/// fill every entry (explicitly or through family rules) before simulation.
class SurvivalMatrixSet {
 public:
  void register_rat(const std::string& rat_id);
  bool has_rat(std::string_view rat_id) const;
  const std::vector<std::string>& rats() const { return rats_; }

  /// Throws LookupError for unregistered RATs. Unset entries read as 0
  /// (no survival) so a partially configured matrix stays conservative.
  double sigma(TrustComponent c, std::string_view from, std::string_view to) const;
  bool is_set(TrustComponent c, std::string_view from, std::string_view to) const;

  /// Throws LookupError for unregistered RATs, ValidationError for values
  /// outside [0,1].
  void set(TrustComponent c, std::string_view from, std::string_view to, double value);

 private:
  std::size_t rat_index(std::string_view rat_id) const;  // throws LookupError

  std::vector<std::string> rats_;
  std::array<std::vector<double>, kComponentCount> sigma_{};
  std::array<std::vector<char>, kComponentCount> set_{};
};

/// Everything recorded about one boundary crossing, for the report and the
/// energy ledger.
struct CrossingRecord {
  double time_s = 0.0;
  std::string from_rat;
  std::string to_rat;
  TransitionKind kind = TransitionKind::Planned;
  TrustState pre_state;        // instant before the crossing
  TrustState post_state;       // after survival application
  TrustState recovered_state;  // after re-authentication and ceiling clamp
  double cost_mj = 0.0;        // naive recovery cost charged to the ledger
  std::optional<double> portable_cost_mj;
  std::vector<TrustComponent> accepted_artefacts;
  double trust_gap_s = 0.0;
  bool gap_exploited = false;
};

/// Applies the survival matrices to a state: s_j <- sigma_j(from,to) * s_j.
TrustState apply_crossing(const TrustState& state, std::string_view from, std::string_view to,
                          const SurvivalMatrixSet& matrices);

/// Energy to rebuild the trust deficit on the target RAT:
///   alpha(kind) * sum_j c_j(to) * (1 - sigma_j(from, to)).
double recovery_cost(std::string_view from, const RatProfile& to, TransitionKind kind,
                     const SurvivalMatrixSet& matrices);

/// Full re-authentication on the target RAT: raises each component to at
/// least the reauth attainment, capped at the ceiling.
TrustState recover(const TrustState& post_state, const RatProfile& to);

}  // namespace ztratsim
