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
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ztratsim/rng.hpp"
#include "ztratsim/transition.hpp"
#include "ztratsim/trust_core.hpp"

namespace ztratsim {

using MacKey = std::array<std::uint8_t, 16>;
using Nonce = std::array<std::uint8_t, 16>;
using MacTag = std::array<std::uint8_t, 16>;

/// Portable trust evidence: a single component-level assertion, bound to a
/// device, freshness-stamped, and sealed with a keyed tag. The artefact
/// carries only the assessed level, never the raw evidence behind it.
struct TrustArtefact {
  std::string issuer_id;   // trust domain that produced the assertion
  std::string device_id;   // hardware identity the artefact is bound to
  TrustComponent component = TrustComponent::Identity;
  double asserted_level = 0.0;  // in [0,1]
  std::int64_t issued_at_ms = 0;
  Nonce nonce{};
  MacTag tag{};
};

/// Canonical byte encoding of everything the tag covers, in fixed field
/// order: issuer, device, component index, level as raw IEEE-754 bits,
/// issue time in milliseconds, nonce. Multi-byte integers are big-endian;
/// strings are length-prefixed (32-bit). No padding.
std::vector<std::uint8_t> artefact_payload(const TrustArtefact& artefact);

/// Creates and seals an artefact. The nonce is drawn from the caller's
/// deterministic generator. Throws ValidationError when level is outside
/// [0,1].
TrustArtefact issue_artefact(std::string issuer_id, std::string device_id, TrustComponent component,
                             double level, std::int64_t now_ms, const MacKey& key,
                             Pcg32& nonce_rng);

enum class ArtefactDecision : std::uint8_t {
  Accepted = 0,
  RejectedStale,
  RejectedReplay,
  RejectedBinding,
  RejectedIntegrity,
  RejectedRevoked,
};

std::string_view decision_name(ArtefactDecision d);

/// Remembered (issuer, nonce) pairs. Bounded; evicts oldest-first once the
/// capacity is reached. While a nonce is cached, re-presentation of the
/// same artefact is rejected as a replay.
class ReplayCache {
 public:
  explicit ReplayCache(std::size_t capacity = 4096);

  bool seen(std::string_view issuer_id, const Nonce& nonce) const;
  void insert(std::string_view issuer_id, const Nonce& nonce);
  std::size_t size() const { return order_.size(); }

 private:
  std::size_t capacity_;
  std::deque<std::string> order_;
  std::unordered_set<std::string> keys_;
};

/// (issuer, nonce) pairs withdrawn before natural expiry.
class RevocationList {
 public:
  void revoke(std::string_view issuer_id, const Nonce& nonce);
  bool revoked(std::string_view issuer_id, const Nonce& nonce) const;

 private:
  std::unordered_set<std::string> keys_;
};

/// Full validation pipeline: integrity, device binding, freshness (window
/// is inclusive), revocation, replay. On acceptance the nonce enters the
/// cache so later presentations are rejected. Pass a null revocation list
/// when the validating domain is disconnected and cannot consult one.
ArtefactDecision validate_artefact(const TrustArtefact& artefact,
                                   std::string_view presenting_device_id, std::int64_t now_ms,
                                   double freshness_window_s, ReplayCache& cache,
                                   const RevocationList* revocations, const MacKey& key);

/// Survival with evidence: the improved value applies only when the
/// artefact was accepted. Throws ConfigError when improved < base, which
/// indicates a misconfigured portability table.
double effective_survival(double base_sigma, ArtefactDecision decision, double improved_sigma);

/// Recovery cost with accepted components re-verified from evidence instead
/// of fully re-established:
///   alpha * [ sum_{j not accepted} c_j (1 - sigma_j) + sum_{j accepted} verify_j ].
/// Throws ConfigError when a verify cost is not strictly cheaper than the
/// full re-establishment cost for an accepted component.
double portable_recovery_cost(std::string_view from, const RatProfile& to, TransitionKind kind,
                              const SurvivalMatrixSet& matrices,
                              const std::set<TrustComponent>& accepted_components,
                              const std::array<double, kComponentCount>& verify_costs_mj);

/// The shipped three-step portability ladder for one reference transition:
/// no portability, portable identity, portable identity+device+context.
/// Costs and latencies are calibration data loaded from the defaults file.
struct PortabilityLadder {
  std::string from = "5g";
  std::string to = "lorawan";
  TransitionKind kind = TransitionKind::Planned;
  std::array<double, kComponentCount> cost_mj{};
  std::array<double, kComponentCount> verify_mj{};
  std::array<double, kComponentCount> latency_ms{};
  std::array<double, kComponentCount> verify_latency_ms{};
};

struct LadderResult {
  double full_mj = 0.0;
  double identity_mj = 0.0;
  double max_portable_mj = 0.0;
  double full_latency_ms = 0.0;
  double identity_latency_ms = 0.0;
  double max_portable_latency_ms = 0.0;
  double energy_saving_pct = 0.0;   // full vs max portable
  double latency_saving_pct = 0.0;  // full vs max portable
};

/// Evaluates the ladder against the active survival matrices. Energy goes
/// through portable_recovery_cost; latency uses the same deficit-weighted
/// form.
LadderResult evaluate_ladder(const PortabilityLadder& ladder, const RatProfile& to_profile,
                             const SurvivalMatrixSet& matrices);

}  // namespace ztratsim
