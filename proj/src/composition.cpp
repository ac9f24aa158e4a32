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

#include "ztratsim/composition.hpp"

#include <algorithm>

#include "ztratsim/error.hpp"

namespace ztratsim {

namespace {

constexpr std::array<std::string_view, 3> kSensitivityNames = {"low", "medium", "high"};
constexpr std::array<double, 3> kSensitivityThresholds = {0.0, 0.4, 0.6};

}  // namespace

std::string_view sensitivity_name(FlowSensitivity s) {
  return kSensitivityNames[static_cast<std::size_t>(s)];
}

std::optional<FlowSensitivity> sensitivity_from(std::string_view name) {
  for (std::size_t i = 0; i < kSensitivityNames.size(); ++i) {
    if (kSensitivityNames[i] == name) return static_cast<FlowSensitivity>(i);
  }
  return std::nullopt;
}

double sensitivity_threshold(FlowSensitivity s) {
  return kSensitivityThresholds[static_cast<std::size_t>(s)];
}

void ParallelLinkSet::add(ParallelLink link) {
  if (contains(link.rat_id)) {
    throw ValidationError("parallel link set: duplicate rat_id '" + link.rat_id + "'");
  }
  links_.push_back(std::move(link));
}

bool ParallelLinkSet::remove(std::string_view rat_id) {
  auto it = std::find_if(links_.begin(), links_.end(),
                         [&](const ParallelLink& l) { return l.rat_id == rat_id; });
  if (it == links_.end()) return false;
  links_.erase(it);
  return true;
}

bool ParallelLinkSet::contains(std::string_view rat_id) const { return find(rat_id) != nullptr; }

const ParallelLink* ParallelLinkSet::find(std::string_view rat_id) const {
  for (const auto& link : links_) {
    if (link.rat_id == rat_id) return &link;
  }
  return nullptr;
}

ParallelLink* ParallelLinkSet::find(std::string_view rat_id) {
  for (auto& link : links_) {
    if (link.rat_id == rat_id) return &link;
  }
  return nullptr;
}

double parallel_compose(const ParallelLinkSet& links, const WeightVector& weights) {
  if (links.empty()) throw ValidationError("parallel_compose: link set is empty");
  if (!weights.valid()) {
    throw ValidationError("parallel_compose: weights must be positive and sum to 1");
  }

  double max_id = 0.0;
  double max_dev = 0.0;
  double min_net = 1.0;
  double min_pol = 1.0;
  std::vector<double> contexts;
  contexts.reserve(links.size());

  for (const auto& link : links.links()) {
    max_id = std::max(max_id, link.state[TrustComponent::Identity]);
    max_dev = std::max(max_dev, link.state[TrustComponent::Device]);
    min_net = std::min(min_net, link.state[TrustComponent::Network]);
    min_pol = std::min(min_pol, link.state[TrustComponent::Policy]);
    contexts.push_back(link.trust_silo ? link.silo_context_value
                                       : link.state[TrustComponent::Context]);
  }

  // Sum contexts in value order so the mean is independent of link order.
  std::sort(contexts.begin(), contexts.end());
  double ctx_sum = 0.0;
  for (double c : contexts) ctx_sum += c;
  const double mean_ctx = ctx_sum / static_cast<double>(contexts.size());

  TrustState aggregate;
  aggregate[TrustComponent::Identity] = max_id;
  aggregate[TrustComponent::Device] = max_dev;
  aggregate[TrustComponent::Context] = mean_ctx;
  aggregate[TrustComponent::Network] = min_net;
  aggregate[TrustComponent::Policy] = min_pol;
  return composite_score(aggregate, weights);
}

std::map<std::string, double> per_flow_network_trust(const std::vector<FlowAssignment>& flows,
                                                     const ParallelLinkSet& links) {
  std::map<std::string, double> out;
  for (const auto& flow : flows) {
    const ParallelLink* carrier = links.find(flow.carried_on);
    if (carrier == nullptr) {
      throw LookupError("flow '" + flow.flow_id + "' assigned to inactive link '" +
                        flow.carried_on + "'");
    }
    out[flow.flow_id] = carrier->state[TrustComponent::Network];
  }
  return out;
}

}  // namespace ztratsim
