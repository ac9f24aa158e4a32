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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ztratsim {

/// The five trust dimensions tracked per device. The declaration order is
/// the canonical serialization order (id, dev, ctx, net, pol) used by every
/// vector-valued key in scenario files, the timeline CSV, and artefact
/// encodings.
enum class TrustComponent : std::uint8_t {
  Identity = 0,
  Device = 1,
  Context = 2,
  Network = 3,
  Policy = 4,
};

inline constexpr std::size_t kComponentCount = 5;

inline constexpr std::array<TrustComponent, kComponentCount> kComponents = {
    TrustComponent::Identity, TrustComponent::Device, TrustComponent::Context,
    TrustComponent::Network, TrustComponent::Policy};

std::string_view short_name(TrustComponent c);  // "id", "dev", "ctx", "net", "pol"
std::optional<TrustComponent> component_from(std::string_view name);

constexpr std::size_t index_of(TrustComponent c) {
  return static_cast<std::size_t>(c);
}

/// Per-component trust levels, each in [0, 1]. Plain value type; all
/// operations on it are pure functions.
struct TrustState {
  std::array<double, kComponentCount> v{0.0, 0.0, 0.0, 0.0, 0.0};

  double operator[](TrustComponent c) const { return v[index_of(c)]; }
  double& operator[](TrustComponent c) { return v[index_of(c)]; }

  bool in_unit_range() const;

  /// State with every component equal to x. Its composite score equals x
  /// under any normalized weight vector.
  static TrustState uniform(double x) { return TrustState{{x, x, x, x, x}}; }

  friend bool operator==(const TrustState&, const TrustState&) = default;
};

/// Aggregation weights for the composite score. Valid when every weight is
/// positive and the sum is 1 within 1e-9.
struct WeightVector {
  std::array<double, kComponentCount> w{0.2, 0.2, 0.2, 0.2, 0.2};

  double operator[](TrustComponent c) const { return w[index_of(c)]; }
  bool valid() const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

inline constexpr double kWeightSumTolerance = 1e-9;

/// Commercial deployment profile: network and context weighted up.
WeightVector commercial_weights();
/// Defence / contested-environment profile: identity and device weighted up.
WeightVector defence_weights();

/// Temporal decay configuration for one RAT. Component j decays as
/// s_j * exp(-(lambda_j * dt)^k_j) with dt in minutes; k = 1 is plain
/// exponential decay. Event triggers apply one-shot multiplicative drops.
struct DecayParams {
  std::array<double, kComponentCount> lambda_per_min{0, 0, 0, 0, 0};  // >= 0
  std::array<double, kComponentCount> shape{1, 1, 1, 1, 1};           // > 0

  struct EventTrigger {
    TrustComponent component;
    double factor;  // in [0, 1]
  };
  std::map<std::string, std::vector<EventTrigger>, std::less<>> event_triggers;
};

enum class RatFamily : std::uint8_t {
  Cellular,
  LpwanStar,
  LoraMesh,
  ProprietaryC2,
  TelemetrySerial,
  Ble,
  Wifi,
  Satellite,
};

std::string_view family_name(RatFamily f);
std::optional<RatFamily> family_from(std::string_view name);

/// Trust capabilities of one radio access technology: what trust each
/// component can reach there (ceiling), what a full re-authentication on
/// that RAT alone attains (reauth), and what re-establishing each component
/// costs.
struct RatProfile {
  std::string rat_id;
  RatFamily family = RatFamily::Cellular;
  TrustState ceiling;                                        // s-hat per component
  TrustState reauth;                                         // r per component, r <= ceiling
  std::array<double, kComponentCount> reauth_cost_mj{};      // c per component
  double verify_cost_mj = 0.0;                               // one continuous-verification tick
  DecayParams decay;
  bool mutual_auth = false;
  bool trust_silo = false;   // no artefact can be issued from or validated in this domain
  bool connected = true;     // revocation lists are only reachable when connected
  double silo_context_value = 0.5;  // context contribution in parallel composition
};

/// Returns a list of human-readable invariant violations; empty means valid.
std::vector<std::string> validate_profile(const RatProfile& profile);

/// Weighted aggregation of a trust state. Throws ValidationError when the
/// weights fail their invariants.
double composite_score(const TrustState& state, const WeightVector& weights);

/// Evolves a state forward dt minutes under the given decay parameters.
/// Components never increase. Throws ValidationError for negative dt.
TrustState decay(const TrustState& state, double dt_min, const DecayParams& params);

struct EventDecayOutcome {
  TrustState state;
  bool recognized;  // false: the event had no trigger registered; state unchanged
};

/// Applies a step-function decay event (certificate revocation notice,
/// firmware update notification, ...). Unknown events are no-ops reported
/// through `recognized`.
EventDecayOutcome apply_event_decay(const TrustState& state, std::string_view event_name,
                                    const DecayParams& params);

/// Clamps each component to the profile ceiling. Idempotent.
TrustState clamp_to_ceiling(const TrustState& state, const RatProfile& profile);

/// Maximum achievable composite score on the profile's RAT.
double trust_ceiling(const RatProfile& profile, const WeightVector& weights);

}  // namespace ztratsim
