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
#include <span>
#include <string>
#include <vector>

#include "ztratsim/scenario.hpp"

namespace ztratsim {

/// One timeline row. Rows are emitted at a one-second cadence and at every
/// event, with strictly increasing timestamps (multiple rows at one event
/// instant are spread by one millisecond).
struct TimelineSample {
  std::int64_t t_ms = 0;
  std::string event;                     // empty for plain cadence rows
  std::vector<std::string> active_rats;  // primary link first
  TrustState primary;                    // primary data link state
  /// Per-link states, same order as active_rats. Not serialized to CSV
  /// (which carries the primary columns only); used for flow exposure.
  std::vector<TrustState> link_states;
  double composite = 0.0;                // parallel composition over all active links
  double energy_cum_mj = 0.0;
  bool below_threshold = false;          // composite < t_min (strict)
};

using Timeline = std::vector<TimelineSample>;

/// Cross-check of one externally published figure against the engine's own
/// arithmetic. `mismatch` means the delta exceeds the figure's printing
/// precision, i.e. a genuine discrepancy rather than rounding.
struct PaperCheckEntry {
  std::string key;
  double published = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool mismatch = false;
};

struct FlowExposure {
  std::string flow_id;
  std::string carried_on;
  FlowSensitivity sensitivity = FlowSensitivity::Low;
  double minutes_below = 0.0;  // carrier network trust under threshold, or carrier down
  bool flagged = false;
};

enum class BudgetVerdict : std::uint8_t { Feasible, Infeasible, NotConfigured };

struct BudgetReport {
  BudgetVerdict verdict = BudgetVerdict::NotConfigured;
  double p_auth_mw = 0.0;
  double budget_mj = 0.0;
  double total_mj = 0.0;
  double deficit_mj = 0.0;           // positive when infeasible
  bool negative_budget = false;      // P_auth came out negative
};

struct MissionReport {
  std::string scenario_name;
  std::uint64_t seed = 0;
  double duration_min = 0.0;

  double initial_auth_mj = 0.0;
  /// Authentication totals (initial auth + crossings), excluding the
  /// continuous-verification energy which is reported separately.
  double total_naive_mj = 0.0;
  std::optional<double> total_portable_mj;
  std::optional<double> saving_pct;

  int verification_count = 0;
  double verify_interval_s = 0.0;
  double verify_energy_mj = 0.0;

  std::vector<CrossingRecord> crossings;

  double sub_threshold_min = 0.0;
  double sub_threshold_fraction = 0.0;

  BudgetReport budget;
  std::vector<FlowExposure> flows;
  std::vector<PaperCheckEntry> paper_check;
  std::vector<std::string> notes;
};

struct RunOptions {
  bool paper_check = false;
  std::optional<std::uint64_t> seed_override;
};

struct RunResult {
  Timeline timeline;
  MissionReport report;
};

/// Runs the scenario: decay between events, survival application and
/// recovery at crossings, refresh and energy charge at verification ticks,
/// adversary actions as they fire. Deterministic for a fixed seed.
/// Trajectory scenarios bypass the event loop and replay their breakpoints.
RunResult run(const MissionScenario& scenario, const RunOptions& options = {});

/// Cumulative mission authentication energy.
double mission_energy(std::span<const CrossingRecord> records, double initial_auth_mj,
                      double verify_energy_mj);
double mission_energy(std::span<const CrossingRecord> records, double initial_auth_mj,
                      int verification_count, double per_verification_mj);

/// Compares a total against the residual power budget
/// P_auth = P_max - P_flight - P_payload - P_comms over the mission
/// duration. The bound is inclusive: spending exactly the budget is
/// feasible.
BudgetReport budget_check(const MissionScenario& scenario, double total_auth_mj);

/// Time below threshold with linear interpolation between samples for the
/// crossing instants. Returns (minutes, fraction of timeline span).
std::pair<double, double> sub_threshold_exposure(const Timeline& timeline, double t_min);

}  // namespace ztratsim
