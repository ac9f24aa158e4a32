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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ztratsim/adversary.hpp"
#include "ztratsim/composition.hpp"
#include "ztratsim/portability.hpp"
#include "ztratsim/transition.hpp"
#include "ztratsim/trust_core.hpp"

namespace ztratsim {

// ---------------------------------------------------------------------------
// Scenario file grammar
//
// Line-oriented: `#` starts a comment, sections are `[name]` or
// `[name arg]`, entries are `key = value`. Vector values are
// whitespace-separated numbers in canonical component order
// (id dev ctx net pol). Sections:
//
//   [mission]               run parameters, weights, threshold, budget
//   [rat <id>]              profile declaration or partial override
//   [survival <component>]  `from.to = value` matrix entries
//   [event]                 one timed event (repeatable, time-ordered)
//   [portability]           artefact configuration and the shipped ladder
//   [flows]                 static flow assignments
//   [trajectory]            direct composite-vs-time breakpoints
//   [published]             externally published values for --paper-check
//
// Unknown sections and keys are hard errors with line numbers.
// ---------------------------------------------------------------------------

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  int line = 0;
  int column = 0;
  std::string message;
  std::string token;  // offending token, when one is identifiable
};

std::string format_diagnostic(const ParseDiagnostic& d);

/// Syntactic form of a scenario file, preserved for canonical re-emission.
struct ScenarioDocument {
  struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
    int column = 0;
  };
  struct Section {
    std::string name;  // "mission", "rat", "survival", ...
    std::string arg;   // rat id / component name, when the section takes one
    std::vector<KeyValue> entries;
    int line = 0;
  };
  std::vector<Section> sections;
};

// --- timed events ----------------------------------------------------------

struct TransitionEvent {
  std::string to;
  TransitionKind kind = TransitionKind::Planned;
  std::optional<double> cost_naive_mj;     // override: ledger cost
  std::optional<double> cost_portable_mj;  // override: portable-column cost
};

struct LinkUpEvent {
  std::string rat;
  double cost_mj = 0.0;
};

struct LinkDownEvent {
  std::string rat;
};

struct DecayTriggerEvent {
  std::string name;  // looked up in the active RAT's event triggers
};

struct AssignFlowEvent {
  FlowAssignment flow;
};

struct PresentArtefactEvent {
  TrustComponent component = TrustComponent::Identity;  // pre-staged for the next crossing
};

using EventPayload = std::variant<TransitionEvent, JamAction, RogueAction, ReplayAction,
                                  ForceTransitionAction, LinkUpEvent, LinkDownEvent,
                                  DecayTriggerEvent, AssignFlowEvent, PresentArtefactEvent>;

struct ScenarioEvent {
  std::int64_t t_ms = 0;
  EventPayload payload;
  int source_line = 0;
};

// --- resolved scenario ------------------------------------------------------

enum class PortabilityMode : std::uint8_t { Naive, Portable, Both };

std::string_view portability_mode_name(PortabilityMode m);
std::optional<PortabilityMode> portability_mode_from(std::string_view name);

/// Remote identification broadcasts as a trust signal. The broadcast is
/// unauthenticated, so it can only ever act as a weak contextual
/// corroborator: when the self-reported track matches authenticated
/// sources, contextual trust goes stale more slowly. A spoofable signal
/// must never raise trust, so spoofed broadcasts are simply ignored.
enum class RemoteIdSignal : std::uint8_t { Absent, Corroborated, Spoofed };

std::string_view remote_id_name(RemoteIdSignal s);
std::optional<RemoteIdSignal> remote_id_from(std::string_view name);

/// Context decay slowdown under corroborating Remote ID.
inline constexpr double kRemoteIdContextDecayFactor = 0.5;

struct PortabilityConfig {
  bool enabled = false;
  std::set<TrustComponent> components;  // artefacts carried across crossings
  std::array<double, kComponentCount> improved_sigma{0.6, 0.9, 0.9, 0.0, 0.0};
  std::array<double, kComponentCount> verify_cost_mj{30.0, 10.0, 10.0, 0.0, 0.0};
  double freshness_window_s = 300.0;
};

struct PowerBudget {
  double p_max_mw = 0.0;
  double p_flight_mw = 0.0;
  double p_payload_mw = 0.0;
  double p_comms_mw = 0.0;
};

struct TrajectoryPoint {
  double t_min = 0.0;
  double composite = 0.0;
};

/// A value published elsewhere for this scenario, checked in --paper-check
/// mode. The tolerance is half a unit in the last printed digit of the
/// published figure; larger deviations are reported as discrepancies.
struct PublishedValue {
  std::string key;
  double value = 0.0;
  double tolerance = 0.5;
};

struct MissionScenario {
  std::string name;
  double duration_min = 90.0;
  WeightVector weights = commercial_weights();
  double t_min = 0.6;
  double verify_interval_s = 30.0;
  std::uint64_t seed = 1;
  std::string device_id = "uav-1";
  std::string start_rat;
  std::optional<TrustState> initial_state;  // default: reauth attainment of start_rat
  double initial_auth_mj = 0.0;
  std::optional<double> initial_auth_portable_mj;
  PortabilityMode mode = PortabilityMode::Naive;
  RemoteIdSignal remote_id = RemoteIdSignal::Absent;
  std::optional<PowerBudget> budget;

  std::vector<std::string> rat_order;  // deterministic registration order
  std::map<std::string, RatProfile> profiles;
  SurvivalMatrixSet matrices;  // fully resolved

  std::vector<ScenarioEvent> events;  // time-sorted
  std::vector<FlowAssignment> flows;
  PortabilityConfig portability;
  std::optional<PortabilityLadder> ladder;
  std::vector<TrajectoryPoint> trajectory;  // non-empty = trajectory scenario
  std::vector<PublishedValue> published;

  bool has_adversary_actions() const;
};

/// Profile and matrix baseline a scenario starts from before applying its
/// own sections.
struct DefaultData {
  std::vector<std::string> rat_order;
  std::map<std::string, RatProfile> profiles;
  SurvivalMatrixSet matrices;
  PortabilityConfig portability;
  std::optional<PortabilityLadder> ladder;
};

struct ParseOutcome {
  std::optional<ScenarioDocument> document;   // present when the file tokenized
  std::optional<MissionScenario> scenario;    // present iff no error diagnostics
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const;  // no Severity::Error entries
};

/// Parses and validates scenario text against the given defaults. Never
/// throws on malformed input; every problem becomes a diagnostic.
ParseOutcome parse_scenario(std::string_view text, const DefaultData& defaults);

/// Canonical form: normalized numbers, sections and keys in grammar order,
/// sorted matrix entries, time-sorted events. A canonical emission parses
/// back to an identical document (fixed point).
std::string emit_scenario(const ScenarioDocument& document);

}  // namespace ztratsim
