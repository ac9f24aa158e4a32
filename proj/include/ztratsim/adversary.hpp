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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ztratsim/rng.hpp"
#include "ztratsim/transition.hpp"

namespace ztratsim {

/// Spectrum-level adversary actions layered on top of the symbolic
/// intercept/inject/replay capabilities: the adversary can deny RATs,
/// stand up decoy infrastructure, and steer which RAT the device lands on.
struct JamAction {
  std::string rat;
  double duration_s = 0.0;
};

struct RogueAction {
  std::string fake_id;  // decoy identifier entering the availability set
  std::string mimics;   // legitimate RAT it impersonates
};

struct ReplayAction {
  int artefact_index = -1;  // index into captured artefacts; -1 = most recent
};

struct ForceTransitionAction {
  std::string target;  // the next transition is reclassified as adversary-forced
};

struct AdversaryAction {
  std::int64_t at_ms = 0;
  std::variant<JamAction, RogueAction, ReplayAction, ForceTransitionAction> action;
};

/// The unauthenticated interval around one boundary crossing, and whether
/// the adversary managed to exploit it.
struct TrustGap {
  double start_s = 0.0;
  double duration_s = 0.0;
  TransitionKind kind = TransitionKind::Planned;
  double exploit_probability = 0.0;
  bool exploited = false;
};

struct GapRanges {
  double duration_lo_s;
  double duration_hi_s;
  double p_lo;
  double p_hi;
};

/// Duration and exploitation-probability ranges per transition kind:
/// planned 50-200 ms / p 0.02-0.05, coverage-driven 0.5-3 s / 0.04-0.08,
/// opportunistic 50-300 ms / 0.02-0.05, adversary-forced 2-15 s / 0.10-0.25.
GapRanges gap_ranges(TransitionKind kind);

/// Draws duration, probability, and the exploitation outcome, in that
/// order, from the caller's generator.
TrustGap sample_trust_gap(TransitionKind kind, double start_s, Pcg32& rng);

/// Consequence of a successful exploitation: contextual and policy trust
/// are zeroed. Identity and device are untouched; credential compromise is
/// outside the model. No-op when the gap was not exploited.
TrustState exploitation_effect(const TrustGap& gap, TrustState state);

/// Jam windows, decoys, and forced-transition flags for one simulation.
/// Owned by the simulation loop; not thread-safe across simulations.
class RfEnvironment {
 public:
  struct Decoy {
    std::string fake_id;
    std::string mimics;
    bool detected = false;  // detected decoys never enter RAT selection
  };

  struct ApplyResult {
    // A transition the action forces on the device (jam of the active RAT).
    std::optional<std::pair<std::string, TransitionKind>> induced_transition;
    bool replay_requested = false;
    int replay_index = -1;
    bool reclassify_next = false;
    std::string reclassify_target;
    std::vector<std::string> notes;
  };

  void register_rat(const std::string& rat_id);
  bool registered(std::string_view rat_id) const;

  /// True when the RAT is not inside a jam window at `now_ms`.
  bool available(std::string_view rat_id, std::int64_t now_ms) const;

  const Decoy* decoy(std::string_view fake_id) const;

  /// Candidates for RAT selection at `now_ms`: available legitimate RATs
  /// plus undetected decoys. Deterministic order (registration order,
  /// decoys after legitimate RATs).
  std::vector<std::string> selectable(std::int64_t now_ms) const;

  /// Highest-ceiling candidate, excluding `excluding`. Ties break toward
  /// the earlier-registered RAT. Decoys rank with the ceiling of the RAT
  /// they mimic.
  std::optional<std::string> best_available(std::int64_t now_ms, std::string_view excluding,
                                            const std::function<double(const std::string&)>&
                                                ceiling_of) const;

  /// Applies one adversary action. `ceiling_of` ranks candidate RATs for
  /// forced fallback; `mutual_auth_of` decides whether a decoy is detected
  /// on arrival. Throws ValidationError when jamming an unregistered RAT.
  ApplyResult apply_action(const AdversaryAction& action, std::int64_t now_ms,
                           const std::string& active_rat,
                           const std::function<double(const std::string&)>& ceiling_of,
                           const std::function<bool(const std::string&)>& mutual_auth_of);

 private:
  std::vector<std::string> rats_;
  std::map<std::string, std::int64_t, std::less<>> jam_until_ms_;
  std::vector<Decoy> decoys_;
};

}  // namespace ztratsim
