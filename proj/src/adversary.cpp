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

#include "ztratsim/adversary.hpp"

#include <algorithm>

#include "ztratsim/error.hpp"

namespace ztratsim {

GapRanges gap_ranges(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Planned:
      return {0.05, 0.2, 0.02, 0.05};
    case TransitionKind::CoverageDriven:
      return {0.5, 3.0, 0.04, 0.08};
    case TransitionKind::Opportunistic:
      return {0.05, 0.3, 0.02, 0.05};
    case TransitionKind::AdversaryForced:
      return {2.0, 15.0, 0.10, 0.25};
  }
  return {0.0, 0.0, 0.0, 0.0};
}

TrustGap sample_trust_gap(TransitionKind kind, double start_s, Pcg32& rng) {
  const GapRanges ranges = gap_ranges(kind);
  TrustGap gap;
  gap.start_s = start_s;
  gap.kind = kind;
  gap.duration_s = rng.uniform(ranges.duration_lo_s, ranges.duration_hi_s);
  gap.exploit_probability = rng.uniform(ranges.p_lo, ranges.p_hi);
  gap.exploited = rng.bernoulli(gap.exploit_probability);
  return gap;
}

TrustState exploitation_effect(const TrustGap& gap, TrustState state) {
  if (!gap.exploited) return state;
  state[TrustComponent::Context] = 0.0;
  state[TrustComponent::Policy] = 0.0;
  return state;
}

void RfEnvironment::register_rat(const std::string& rat_id) {
  if (!registered(rat_id)) rats_.push_back(rat_id);
}

bool RfEnvironment::registered(std::string_view rat_id) const {
  return std::find(rats_.begin(), rats_.end(), rat_id) != rats_.end();
}

bool RfEnvironment::available(std::string_view rat_id, std::int64_t now_ms) const {
  auto it = jam_until_ms_.find(rat_id);
  return it == jam_until_ms_.end() || now_ms >= it->second;
}

const RfEnvironment::Decoy* RfEnvironment::decoy(std::string_view fake_id) const {
  for (const auto& d : decoys_) {
    if (d.fake_id == fake_id) return &d;
  }
  return nullptr;
}

std::vector<std::string> RfEnvironment::selectable(std::int64_t now_ms) const {
  std::vector<std::string> out;
  for (const auto& rat : rats_) {
    if (available(rat, now_ms)) out.push_back(rat);
  }
  for (const auto& d : decoys_) {
    if (!d.detected && available(d.fake_id, now_ms)) out.push_back(d.fake_id);
  }
  return out;
}

std::optional<std::string> RfEnvironment::best_available(
    std::int64_t now_ms, std::string_view excluding,
    const std::function<double(const std::string&)>& ceiling_of) const {
  std::optional<std::string> best;
  double best_ceiling = -1.0;
  for (const auto& candidate : selectable(now_ms)) {
    if (candidate == excluding) continue;
    const Decoy* d = decoy(candidate);
    const double ceiling = ceiling_of(d != nullptr ? d->mimics : candidate);
    if (ceiling > best_ceiling) {
      best_ceiling = ceiling;
      best = candidate;
    }
  }
  return best;
}

RfEnvironment::ApplyResult RfEnvironment::apply_action(
    const AdversaryAction& action, std::int64_t now_ms, const std::string& active_rat,
    const std::function<double(const std::string&)>& ceiling_of,
    const std::function<bool(const std::string&)>& mutual_auth_of) {
  ApplyResult result;

  if (const auto* jam = std::get_if<JamAction>(&action.action)) {
    if (!registered(jam->rat) && decoy(jam->rat) == nullptr) {
      throw ValidationError("jam: RAT '" + jam->rat + "' is not registered");
    }
    const auto until = now_ms + static_cast<std::int64_t>(jam->duration_s * 1000.0);
    auto [it, inserted] = jam_until_ms_.try_emplace(jam->rat, until);
    if (!inserted) it->second = std::max(it->second, until);
    result.notes.push_back("jam " + jam->rat);
    if (jam->rat == active_rat) {
      auto fallback = best_available(now_ms, active_rat, ceiling_of);
      if (fallback.has_value()) {
        result.induced_transition = {*fallback, TransitionKind::AdversaryForced};
      } else {
        result.notes.push_back("no fallback RAT available; device stays on jammed link");
      }
    }
    return result;
  }

  if (const auto* rogue = std::get_if<RogueAction>(&action.action)) {
    if (!registered(rogue->mimics)) {
      throw ValidationError("rogue: mimicked RAT '" + rogue->mimics + "' is not registered");
    }
    Decoy d{rogue->fake_id, rogue->mimics, false};
    // Mutual authentication on the mimicked RAT exposes the decoy at once.
    d.detected = mutual_auth_of(rogue->mimics);
    result.notes.push_back(d.detected ? "rogue " + rogue->fake_id + " detected (mutual auth)"
                                      : "rogue " + rogue->fake_id + " active, mimics " +
                                            rogue->mimics);
    decoys_.push_back(std::move(d));
    return result;
  }

  if (const auto* replay = std::get_if<ReplayAction>(&action.action)) {
    result.replay_requested = true;
    result.replay_index = replay->artefact_index;
    return result;
  }

  const auto& force = std::get<ForceTransitionAction>(action.action);
  if (!registered(force.target)) {
    throw ValidationError("force_transition: RAT '" + force.target + "' is not registered");
  }
  result.reclassify_next = true;
  result.reclassify_target = force.target;
  result.notes.push_back("next transition reclassified as adversary-forced");
  return result;
}

}  // namespace ztratsim
