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

#include <cmath>

#include "doctest.h"
#include "ztratsim/error.hpp"
#include "ztratsim/trust_core.hpp"

using namespace ztratsim;

namespace {

// Weighted-sum oracle, independent of composite_score's implementation.
double weighted_sum(const TrustState& s, const WeightVector& w) {
  double total = 0.0;
  for (std::size_t i = 0; i < kComponentCount; ++i) total += w.w[i] * s.v[i];
  return total;
}

}  // namespace

TEST_CASE("component order and naming are canonical") {
  CHECK(short_name(TrustComponent::Identity) == "id");
  CHECK(short_name(TrustComponent::Device) == "dev");
  CHECK(short_name(TrustComponent::Context) == "ctx");
  CHECK(short_name(TrustComponent::Network) == "net");
  CHECK(short_name(TrustComponent::Policy) == "pol");
  CHECK(component_from("net") == TrustComponent::Network);
  CHECK_FALSE(component_from("bogus").has_value());
}

TEST_CASE("composite score of the canonical pre-transition state") {
  const WeightVector w = commercial_weights();
  const TrustState s{{0.88, 0.82, 0.75, 0.85, 0.78}};
  const double expected = weighted_sum(s, w);
  CHECK(composite_score(s, w) == doctest::Approx(expected).epsilon(1e-12));
  // The published figure for this input is 0.821; exact evaluation gives
  // 0.8175. The engine must agree with the exact value.
  CHECK(composite_score(s, w) == doctest::Approx(0.8175).epsilon(1e-9));
}

TEST_CASE("composite score trivial cases") {
  const WeightVector uniform{{0.2, 0.2, 0.2, 0.2, 0.2}};
  CHECK(composite_score(TrustState{}, uniform) == 0.0);
  CHECK(composite_score(TrustState::uniform(1.0), uniform) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("composite score rejects invalid weights") {
  CHECK_THROWS_AS(composite_score(TrustState{}, WeightVector{{0.5, 0.5, 0.5, 0.5, 0.5}}),
                  ValidationError);
  CHECK_THROWS_AS(composite_score(TrustState{}, WeightVector{{1.0, 0.5, -0.1, -0.2, -0.2}}),
                  ValidationError);
}

TEST_CASE("weight vector validity tolerance") {
  WeightVector w{{0.2, 0.2, 0.2, 0.2, 0.2 + 5e-10}};
  CHECK(w.valid());
  w.w[4] = 0.2 + 5e-9;
  CHECK_FALSE(w.valid());
}

TEST_CASE("exponential decay matches the scalar oracle") {
  DecayParams params;
  params.lambda_per_min = {0.01, 0, 0, 0, 0};
  TrustState s;
  s[TrustComponent::Identity] = 0.8;
  const TrustState out = decay(s, 30.0, params);
  CHECK(out[TrustComponent::Identity] ==
        doctest::Approx(0.8 * std::exp(-0.3)).epsilon(1e-15));
  // Frozen from the oracle: 0.8 * exp(-0.3).
  CHECK(out[TrustComponent::Identity] == doctest::Approx(0.59265457654537).epsilon(1e-12));
  CHECK(out[TrustComponent::Device] == 0.0);
}

TEST_CASE("zero decay rate is the identity") {
  DecayParams params;  // all lambda zero
  const TrustState s{{0.5, 0.6, 0.7, 0.8, 0.9}};
  CHECK(decay(s, 123.0, params) == s);
}

TEST_CASE("weibull shape 1 equals pure exponential") {
  DecayParams exponential;
  exponential.lambda_per_min = {0.01, 0.02, 0.03, 0.04, 0.05};
  DecayParams weibull = exponential;
  weibull.shape = {1, 1, 1, 1, 1};
  const TrustState s{{0.9, 0.8, 0.7, 0.6, 0.5}};
  for (double dt : {0.0, 1.0, 7.5, 90.0}) {
    const TrustState a = decay(s, dt, exponential);
    const TrustState b = decay(s, dt, weibull);
    for (TrustComponent c : kComponents) {
      CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-15));
    }
  }
}

TEST_CASE("weibull shapes bend the decay curve") {
  DecayParams params;
  params.lambda_per_min = {0.05, 0.05, 0, 0, 0};
  params.shape = {0.5, 2.0, 1, 1, 1};
  const TrustState s{{1.0, 1.0, 0, 0, 0}};
  const TrustState out = decay(s, 10.0, params);
  CHECK(out[TrustComponent::Identity] == doctest::Approx(std::exp(-std::pow(0.5, 0.5))));
  CHECK(out[TrustComponent::Device] == doctest::Approx(std::exp(-0.25)));
}

TEST_CASE("negative dt is rejected") {
  CHECK_THROWS_AS(decay(TrustState{}, -1.0, DecayParams{}), ValidationError);
}

TEST_CASE("event decay applies the configured drop") {
  DecayParams params;
  params.event_triggers["firmware-update-notice"].push_back({TrustComponent::Device, 0.5});
  TrustState s;
  s[TrustComponent::Device] = 0.9;
  const auto out = apply_event_decay(s, "firmware-update-notice", params);
  CHECK(out.recognized);
  CHECK(out.state[TrustComponent::Device] == doctest::Approx(0.45));

  const auto unknown = apply_event_decay(s, "never-registered", params);
  CHECK_FALSE(unknown.recognized);
  CHECK(unknown.state == s);
}

TEST_CASE("event decay degenerate factors") {
  DecayParams params;
  params.event_triggers["hold"].push_back({TrustComponent::Context, 1.0});
  params.event_triggers["wipe"].push_back({TrustComponent::Context, 0.0});
  const TrustState s{{0.1, 0.2, 0.8, 0.4, 0.5}};
  CHECK(apply_event_decay(s, "hold", params).state == s);
  CHECK(apply_event_decay(s, "wipe", params).state[TrustComponent::Context] == 0.0);
}

TEST_CASE("ceiling clamp and idempotence") {
  RatProfile meshtastic;
  meshtastic.rat_id = "meshtastic";
  meshtastic.ceiling = TrustState{{0.3, 0.5, 0.5, 0.3, 0.2}};
  meshtastic.reauth = TrustState{{0.27, 0.45, 0.45, 0.27, 0.18}};

  TrustState s;
  s[TrustComponent::Network] = 0.85;
  const TrustState clamped = clamp_to_ceiling(s, meshtastic);
  CHECK(clamped[TrustComponent::Network] == doctest::Approx(0.3));
  CHECK(clamp_to_ceiling(clamped, meshtastic) == clamped);

  const TrustState below{{0.1, 0.1, 0.1, 0.1, 0.1}};
  CHECK(clamp_to_ceiling(below, meshtastic) == below);
}

TEST_CASE("trust ceiling is the weighted ceiling sum") {
  RatProfile lorawan;
  lorawan.rat_id = "lorawan";
  lorawan.ceiling = TrustState{{0.70, 0.65, 0.60, 0.50, 0.40}};
  const WeightVector w = commercial_weights();
  CHECK(trust_ceiling(lorawan, w) == doctest::Approx(weighted_sum(lorawan.ceiling, w)));
  // The achievable composite on this profile sits below a 0.6 threshold.
  CHECK(trust_ceiling(lorawan, w) < 0.6);

  RatProfile perfect;
  perfect.ceiling = TrustState::uniform(1.0);
  CHECK(trust_ceiling(perfect, w) == doctest::Approx(1.0));
}

TEST_CASE("composite of the recovered attainment vector") {
  // Exact evaluation gives 0.5086 where the published figure says 0.499.
  const TrustState recovered{{0.65, 0.574, 0.55, 0.45, 0.35}};
  CHECK(composite_score(recovered, commercial_weights()) ==
        doctest::Approx(0.5086).epsilon(1e-9));
}

TEST_CASE("profile validation catches inverted reauth and bad costs") {
  RatProfile p;
  p.rat_id = "x";
  p.ceiling = TrustState{{0.5, 0.5, 0.5, 0.5, 0.5}};
  p.reauth = TrustState{{0.6, 0.1, 0.1, 0.1, 0.1}};  // above ceiling
  CHECK_FALSE(validate_profile(p).empty());

  p.reauth = TrustState{{0.4, 0.1, 0.1, 0.1, 0.1}};
  CHECK(validate_profile(p).empty());

  p.reauth_cost_mj[0] = -1.0;
  CHECK_FALSE(validate_profile(p).empty());
}
