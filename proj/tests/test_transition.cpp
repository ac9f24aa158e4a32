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

#include "doctest.h"
#include "ztratsim/defaults.hpp"
#include "ztratsim/error.hpp"
#include "ztratsim/transition.hpp"

using namespace ztratsim;

namespace {

// The canonical 4g -> lorawan crossing inputs.
const TrustState kPreState{{0.88, 0.82, 0.75, 0.85, 0.78}};

SurvivalMatrixSet two_rat_matrices() {
  SurvivalMatrixSet m;
  m.register_rat("4g");
  m.register_rat("lorawan");
  const double sigma[kComponentCount] = {0.0, 0.7, 0.5, 0.0, 0.2};
  for (TrustComponent c : kComponents) {
    m.set(c, "4g", "lorawan", sigma[index_of(c)]);
    m.set(c, "4g", "4g", 0.95);
    m.set(c, "lorawan", "lorawan", 0.9);
    m.set(c, "lorawan", "4g", 0.0);
  }
  return m;
}

RatProfile lorawan_profile() {
  RatProfile p;
  p.rat_id = "lorawan";
  p.family = RatFamily::LpwanStar;
  p.ceiling = TrustState{{0.70, 0.65, 0.60, 0.50, 0.40}};
  p.reauth = TrustState{{0.65, 0.0, 0.55, 0.45, 0.35}};
  p.reauth_cost_mj = {350, 180, 120, 200, 80};
  return p;
}

}  // namespace

TEST_CASE("cost multipliers") {
  CHECK(cost_multiplier(TransitionKind::Planned) == 1.0);
  CHECK(cost_multiplier(TransitionKind::CoverageDriven) == 1.3);
  CHECK(cost_multiplier(TransitionKind::Opportunistic) == 0.8);
  CHECK(cost_multiplier(TransitionKind::AdversaryForced) == 2.0);
}

TEST_CASE("kind names round-trip") {
  for (auto kind : {TransitionKind::Planned, TransitionKind::CoverageDriven,
                    TransitionKind::Opportunistic, TransitionKind::AdversaryForced}) {
    CHECK(kind_from(kind_name(kind)) == kind);
  }
  CHECK_FALSE(kind_from("sideways").has_value());
}

TEST_CASE("apply_crossing reproduces the canonical survival application") {
  const auto m = two_rat_matrices();
  const TrustState post = apply_crossing(kPreState, "4g", "lorawan", m);
  CHECK(post[TrustComponent::Identity] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(post[TrustComponent::Device] == doctest::Approx(0.574).epsilon(1e-9));
  CHECK(post[TrustComponent::Context] == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(post[TrustComponent::Network] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(post[TrustComponent::Policy] == doctest::Approx(0.156).epsilon(1e-9));
}

TEST_CASE("apply_crossing identity row leaves the state unchanged") {
  SurvivalMatrixSet m;
  m.register_rat("a");
  m.register_rat("b");
  for (TrustComponent c : kComponents) {
    m.set(c, "a", "b", 1.0);
  }
  CHECK(apply_crossing(kPreState, "a", "b", m) == kPreState);
}

TEST_CASE("apply_crossing rejects unknown RATs") {
  const auto m = two_rat_matrices();
  CHECK_THROWS_AS(apply_crossing(kPreState, "4g", "zigbee", m), LookupError);
  CHECK_THROWS_AS(apply_crossing(kPreState, "zigbee", "4g", m), LookupError);
}

TEST_CASE("recovery cost reproduces the canonical crossing price") {
  const auto m = two_rat_matrices();
  const RatProfile lorawan = lorawan_profile();
  // Oracle: 1.3 * (350*1 + 180*0.3 + 120*0.5 + 200*1 + 80*0.8) = 1.3 * 728.
  CHECK(recovery_cost("4g", lorawan, TransitionKind::CoverageDriven, m) ==
        doctest::Approx(946.4).epsilon(1e-9));
  CHECK(recovery_cost("4g", lorawan, TransitionKind::AdversaryForced, m) ==
        doctest::Approx(1456.0).epsilon(1e-9));
}

TEST_CASE("full survival means zero recovery cost") {
  SurvivalMatrixSet m;
  m.register_rat("a");
  m.register_rat("b");
  for (TrustComponent c : kComponents) m.set(c, "a", "b", 1.0);
  RatProfile b = lorawan_profile();
  b.rat_id = "b";
  CHECK(recovery_cost("a", b, TransitionKind::Planned, m) == 0.0);
}

TEST_CASE("recover raises to the attainment floor and keeps survived values") {
  const RatProfile lorawan = lorawan_profile();
  const TrustState post{{0.0, 0.574, 0.375, 0.0, 0.156}};
  const TrustState recovered = recover(post, lorawan);
  CHECK(recovered[TrustComponent::Identity] == doctest::Approx(0.65).epsilon(1e-12));
  // Device attainment is zero on this profile, so the survived value stays.
  CHECK(recovered[TrustComponent::Device] == doctest::Approx(0.574).epsilon(1e-9));
  CHECK(recovered[TrustComponent::Context] == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(recovered[TrustComponent::Network] == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(recovered[TrustComponent::Policy] == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("recover is idempotent and bounded by the ceiling") {
  const RatProfile lorawan = lorawan_profile();
  const TrustState once = recover(TrustState{}, lorawan);
  CHECK(recover(once, lorawan) == once);

  const TrustState high = TrustState::uniform(1.0);
  const TrustState capped = recover(high, lorawan);
  for (TrustComponent c : kComponents) {
    CHECK(capped[c] == doctest::Approx(lorawan.ceiling[c]));
  }

  RatProfile perfect = lorawan;
  perfect.ceiling = TrustState::uniform(1.0);
  perfect.reauth = TrustState::uniform(1.0);
  CHECK(recover(TrustState{}, perfect) == TrustState::uniform(1.0));
}

TEST_CASE("recover never lowers a state already above the attainment") {
  const RatProfile lorawan = lorawan_profile();
  const TrustState post{{0.68, 0.6, 0.58, 0.48, 0.38}};  // above reauth, below ceiling
  CHECK(recover(post, lorawan) == post);
}

TEST_CASE("shipped identity matrix: within-family survival dominates each row") {
  const DefaultData defaults = load_default_data();
  const auto& m = defaults.matrices;
  for (const std::string& from : m.rats()) {
    const double diag = m.sigma(TrustComponent::Identity, from, from);
    for (const std::string& to : m.rats()) {
      CHECK(diag >= m.sigma(TrustComponent::Identity, from, to));
    }
  }
}

TEST_CASE("shipped matrices: canonical cells") {
  const DefaultData defaults = load_default_data();
  const auto& m = defaults.matrices;
  // Identity is wiped into a mesh even from cellular.
  CHECK(m.sigma(TrustComponent::Identity, "5g", "meshtastic") == 0.0);
  // Intra-cellular handover keeps identity.
  CHECK(m.sigma(TrustComponent::Identity, "5g", "4g") == doctest::Approx(0.95));
  CHECK(m.sigma(TrustComponent::Identity, "4g", "5g") == doctest::Approx(0.95));
  // The canonical crossing row.
  CHECK(m.sigma(TrustComponent::Identity, "4g", "lorawan") == 0.0);
  CHECK(m.sigma(TrustComponent::Device, "4g", "lorawan") == doctest::Approx(0.7));
  CHECK(m.sigma(TrustComponent::Context, "4g", "lorawan") == doctest::Approx(0.5));
  CHECK(m.sigma(TrustComponent::Network, "4g", "lorawan") == 0.0);
  CHECK(m.sigma(TrustComponent::Policy, "4g", "lorawan") == doctest::Approx(0.2));
  // Network trust never crosses families.
  for (const std::string& to : m.rats()) {
    if (to == "5g" || to == "4g") continue;
    CHECK(m.sigma(TrustComponent::Network, "5g", to) == 0.0);
  }
  // BLE bonds are session-local.
  CHECK(m.sigma(TrustComponent::Identity, "ble", "ble") == doctest::Approx(0.8));
  CHECK(m.sigma(TrustComponent::Identity, "ble", "wifi") == 0.0);
  CHECK(m.sigma(TrustComponent::Device, "ble", "wifi") == doctest::Approx(0.5));
}

TEST_CASE("matrix entries outside [0,1] are rejected") {
  SurvivalMatrixSet m;
  m.register_rat("a");
  CHECK_THROWS_AS(m.set(TrustComponent::Identity, "a", "a", 1.5), ValidationError);
  CHECK_THROWS_AS(m.set(TrustComponent::Identity, "a", "a", -0.1), ValidationError);
}
