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

#include "ztratsim/trust_core.hpp"

#include <cmath>
#include <sstream>

#include "ztratsim/error.hpp"

namespace ztratsim {

namespace {

constexpr std::array<std::string_view, kComponentCount> kShortNames = {"id", "dev", "ctx",
                                                                       "net", "pol"};

constexpr std::array<std::string_view, 8> kFamilyNames = {
    "cellular", "lpwan-star", "lora-mesh",  "proprietary-c2",
    "telemetry-serial", "ble", "wifi", "satellite"};

}  // namespace

std::string_view short_name(TrustComponent c) { return kShortNames[index_of(c)]; }

std::optional<TrustComponent> component_from(std::string_view name) {
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    if (kShortNames[i] == name) return static_cast<TrustComponent>(i);
  }
  return std::nullopt;
}

std::string_view family_name(RatFamily f) { return kFamilyNames[static_cast<std::size_t>(f)]; }

std::optional<RatFamily> family_from(std::string_view name) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
    if (kFamilyNames[i] == name) return static_cast<RatFamily>(i);
  }
  return std::nullopt;
}

bool TrustState::in_unit_range() const {
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) return false;
  }
  return true;
}

bool WeightVector::valid() const {
  double sum = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= kWeightSumTolerance;
}

WeightVector commercial_weights() { return WeightVector{{0.20, 0.15, 0.20, 0.25, 0.20}}; }

WeightVector defence_weights() { return WeightVector{{0.30, 0.25, 0.15, 0.15, 0.15}}; }

std::vector<std::string> validate_profile(const RatProfile& profile) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& what) { problems.push_back(profile.rat_id + ": " + what); };

  if (!profile.ceiling.in_unit_range()) complain("ceiling components must lie in [0,1]");
  if (!profile.reauth.in_unit_range()) complain("reauth components must lie in [0,1]");
  for (TrustComponent c : kComponents) {
    if (profile.reauth[c] > profile.ceiling[c]) {
      std::ostringstream os;
      os << "reauth attainment exceeds ceiling for component " << short_name(c);
      complain(os.str());
    }
    if (profile.reauth_cost_mj[index_of(c)] < 0.0) complain("re-establishment costs must be >= 0");
    if (profile.decay.lambda_per_min[index_of(c)] < 0.0) complain("decay rates must be >= 0");
    if (!(profile.decay.shape[index_of(c)] > 0.0)) complain("decay shapes must be > 0");
  }
  if (profile.verify_cost_mj < 0.0) complain("per-verification cost must be >= 0");
  for (const auto& [event, triggers] : profile.decay.event_triggers) {
    for (const auto& trig : triggers) {
      if (!(trig.factor >= 0.0 && trig.factor <= 1.0)) {
        complain("event '" + event + "' drop factor must lie in [0,1]");
      }
    }
  }
  return problems;
}

double composite_score(const TrustState& state, const WeightVector& weights) {
  if (!weights.valid()) {
    throw ValidationError("composite_score: weights must be positive and sum to 1");
  }
  double score = 0.0;
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    score += weights.w[i] * state.v[i];
  }
  return score;
}

TrustState decay(const TrustState& state, double dt_min, const DecayParams& params) {
  if (dt_min < 0.0) throw ValidationError("decay: dt must be >= 0");
  TrustState out = state;
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    const double x = params.lambda_per_min[i] * dt_min;
    const double k = params.shape[i];
    const double exponent = (k == 1.0) ? x : std::pow(x, k);
    out.v[i] = state.v[i] * std::exp(-exponent);
  }
  return out;
}

EventDecayOutcome apply_event_decay(const TrustState& state, std::string_view event_name,
                                    const DecayParams& params) {
  auto it = params.event_triggers.find(event_name);
  if (it == params.event_triggers.end()) return {state, false};
  TrustState out = state;
  for (const auto& trig : it->second) {
    out[trig.component] *= trig.factor;
  }
  return {out, true};
}

TrustState clamp_to_ceiling(const TrustState& state, const RatProfile& profile) {
  TrustState out = state;
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    out.v[i] = std::min(out.v[i], profile.ceiling.v[i]);
  }
  return out;
}

double trust_ceiling(const RatProfile& profile, const WeightVector& weights) {
  return composite_score(profile.ceiling, weights);
}

}  // namespace ztratsim
