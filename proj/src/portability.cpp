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

#include "ztratsim/portability.hpp"

#include <bit>
#include <cstring>

#include "ztratsim/error.hpp"
#include "ztratsim/siphash.hpp"

namespace ztratsim {

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  out.push_back(static_cast<std::uint8_t>(x >> 24));
  out.push_back(static_cast<std::uint8_t>(x >> 16));
  out.push_back(static_cast<std::uint8_t>(x >> 8));
  out.push_back(static_cast<std::uint8_t>(x));
}

void put_be64(std::vector<std::uint8_t>& out, std::uint64_t x) {
  put_be32(out, static_cast<std::uint32_t>(x >> 32));
  put_be32(out, static_cast<std::uint32_t>(x));
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
  put_be32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

std::string cache_key(std::string_view issuer_id, const Nonce& nonce) {
  std::string key;
  key.reserve(issuer_id.size() + 1 + nonce.size());
  key.append(issuer_id);
  key.push_back('\0');
  key.append(reinterpret_cast<const char*>(nonce.data()), nonce.size());
  return key;
}

}  // namespace

std::vector<std::uint8_t> artefact_payload(const TrustArtefact& artefact) {
  std::vector<std::uint8_t> out;
  out.reserve(artefact.issuer_id.size() + artefact.device_id.size() + 48);
  put_string(out, artefact.issuer_id);
  put_string(out, artefact.device_id);
  out.push_back(static_cast<std::uint8_t>(artefact.component));
  put_be64(out, std::bit_cast<std::uint64_t>(artefact.asserted_level));
  put_be64(out, static_cast<std::uint64_t>(artefact.issued_at_ms));
  out.insert(out.end(), artefact.nonce.begin(), artefact.nonce.end());
  return out;
}

TrustArtefact issue_artefact(std::string issuer_id, std::string device_id,
                             TrustComponent component, double level, std::int64_t now_ms,
                             const MacKey& key, Pcg32& nonce_rng) {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw ValidationError("issue_artefact: asserted level must lie in [0,1]");
  }
  TrustArtefact artefact;
  artefact.issuer_id = std::move(issuer_id);
  artefact.device_id = std::move(device_id);
  artefact.component = component;
  artefact.asserted_level = level;
  artefact.issued_at_ms = now_ms;
  for (std::size_t i = 0; i < artefact.nonce.size(); i += 4) {
    const std::uint32_t word = nonce_rng.next_u32();
    artefact.nonce[i] = static_cast<std::uint8_t>(word >> 24);
    artefact.nonce[i + 1] = static_cast<std::uint8_t>(word >> 16);
    artefact.nonce[i + 2] = static_cast<std::uint8_t>(word >> 8);
    artefact.nonce[i + 3] = static_cast<std::uint8_t>(word);
  }
  artefact.tag = siphash_2_4_128(artefact_payload(artefact), key);
  return artefact;
}

std::string_view decision_name(ArtefactDecision d) {
  switch (d) {
    case ArtefactDecision::Accepted:
      return "accepted";
    case ArtefactDecision::RejectedStale:
      return "rejected-stale";
    case ArtefactDecision::RejectedReplay:
      return "rejected-replay";
    case ArtefactDecision::RejectedBinding:
      return "rejected-binding";
    case ArtefactDecision::RejectedIntegrity:
      return "rejected-integrity";
    case ArtefactDecision::RejectedRevoked:
      return "rejected-revoked";
  }
  return "unknown";
}

ReplayCache::ReplayCache(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

bool ReplayCache::seen(std::string_view issuer_id, const Nonce& nonce) const {
  return keys_.contains(cache_key(issuer_id, nonce));
}

void ReplayCache::insert(std::string_view issuer_id, const Nonce& nonce) {
  std::string key = cache_key(issuer_id, nonce);
  if (keys_.contains(key)) return;
  while (order_.size() >= capacity_) {
    keys_.erase(order_.front());
    order_.pop_front();
  }
  order_.push_back(key);
  keys_.insert(std::move(key));
}

void RevocationList::revoke(std::string_view issuer_id, const Nonce& nonce) {
  keys_.insert(cache_key(issuer_id, nonce));
}

bool RevocationList::revoked(std::string_view issuer_id, const Nonce& nonce) const {
  return keys_.contains(cache_key(issuer_id, nonce));
}

ArtefactDecision validate_artefact(const TrustArtefact& artefact,
                                   std::string_view presenting_device_id, std::int64_t now_ms,
                                   double freshness_window_s, ReplayCache& cache,
                                   const RevocationList* revocations, const MacKey& key) {
  const MacTag expected = siphash_2_4_128(artefact_payload(artefact), key);
  if (expected != artefact.tag) return ArtefactDecision::RejectedIntegrity;
  if (presenting_device_id != artefact.device_id) return ArtefactDecision::RejectedBinding;
  const double age_s = static_cast<double>(now_ms - artefact.issued_at_ms) / 1000.0;
  if (age_s < 0.0 || age_s > freshness_window_s) return ArtefactDecision::RejectedStale;
  if (revocations != nullptr && revocations->revoked(artefact.issuer_id, artefact.nonce)) {
    return ArtefactDecision::RejectedRevoked;
  }
  if (cache.seen(artefact.issuer_id, artefact.nonce)) return ArtefactDecision::RejectedReplay;
  cache.insert(artefact.issuer_id, artefact.nonce);
  return ArtefactDecision::Accepted;
}

double effective_survival(double base_sigma, ArtefactDecision decision, double improved_sigma) {
  if (improved_sigma < base_sigma) {
    throw ConfigError("effective_survival: improved sigma is below the base sigma");
  }
  return decision == ArtefactDecision::Accepted ? improved_sigma : base_sigma;
}

double portable_recovery_cost(std::string_view from, const RatProfile& to, TransitionKind kind,
                              const SurvivalMatrixSet& matrices,
                              const std::set<TrustComponent>& accepted_components,
                              const std::array<double, kComponentCount>& verify_costs_mj) {
  double total = 0.0;
  for (TrustComponent c : kComponents) {
    const std::size_t i = index_of(c);
    if (accepted_components.contains(c)) {
      if (!(verify_costs_mj[i] < to.reauth_cost_mj[i])) {
        throw ConfigError("portable_recovery_cost: verify cost must be cheaper than full "
                          "re-establishment for component " +
                          std::string(short_name(c)));
      }
      total += verify_costs_mj[i];
    } else {
      total += to.reauth_cost_mj[i] * (1.0 - matrices.sigma(c, from, to.rat_id));
    }
  }
  return cost_multiplier(kind) * total;
}

LadderResult evaluate_ladder(const PortabilityLadder& ladder, const RatProfile& to_profile,
                             const SurvivalMatrixSet& matrices) {
  RatProfile costed = to_profile;
  costed.reauth_cost_mj = ladder.cost_mj;

  const std::set<TrustComponent> none;
  const std::set<TrustComponent> identity{TrustComponent::Identity};
  const std::set<TrustComponent> max_set{TrustComponent::Identity, TrustComponent::Device,
                                         TrustComponent::Context};

  LadderResult result;
  result.full_mj = portable_recovery_cost(ladder.from, costed, ladder.kind, matrices, none,
                                          ladder.verify_mj);
  result.identity_mj = portable_recovery_cost(ladder.from, costed, ladder.kind, matrices, identity,
                                              ladder.verify_mj);
  result.max_portable_mj = portable_recovery_cost(ladder.from, costed, ladder.kind, matrices,
                                                  max_set, ladder.verify_mj);

  RatProfile latencied = to_profile;
  latencied.reauth_cost_mj = ladder.latency_ms;
  result.full_latency_ms = portable_recovery_cost(ladder.from, latencied, ladder.kind, matrices,
                                                  none, ladder.verify_latency_ms);
  result.identity_latency_ms = portable_recovery_cost(ladder.from, latencied, ladder.kind,
                                                      matrices, identity, ladder.verify_latency_ms);
  result.max_portable_latency_ms = portable_recovery_cost(ladder.from, latencied, ladder.kind,
                                                          matrices, max_set,
                                                          ladder.verify_latency_ms);

  result.energy_saving_pct = result.full_mj > 0.0
                                 ? 100.0 * (result.full_mj - result.max_portable_mj) / result.full_mj
                                 : 0.0;
  result.latency_saving_pct =
      result.full_latency_ms > 0.0
          ? 100.0 * (result.full_latency_ms - result.max_portable_latency_ms) /
                result.full_latency_ms
          : 0.0;
  return result;
}

}  // namespace ztratsim
