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
#include <string>
#include <string_view>
#include <vector>

#include "ztratsim/trust_core.hpp"

namespace ztratsim {

enum class FlowSensitivity : std::uint8_t { Low = 0, Medium = 1, High = 2 };

std::string_view sensitivity_name(FlowSensitivity s);
std::optional<FlowSensitivity> sensitivity_from(std::string_view name);

/// Minimum carrier network trust expected for a flow of this sensitivity.
/// Flows whose carrier falls below it get flagged in the report.
double sensitivity_threshold(FlowSensitivity s);  // low 0.0, medium 0.4, high 0.6

/// One concurrently active radio link with its own trust state. Silo links
/// contribute a fixed context value to parallel composition because their
/// internal context is opaque to the policy engine.
struct ParallelLink {
  std::string rat_id;
  TrustState state;
  std::int64_t activated_at_ms = 0;
  bool trust_silo = false;
  double silo_context_value = 0.5;
};

class ParallelLinkSet {
 public:
  /// Throws ValidationError on duplicate rat_id.
  void add(ParallelLink link);
  bool remove(std::string_view rat_id);
  bool contains(std::string_view rat_id) const;
  const ParallelLink* find(std::string_view rat_id) const;
  ParallelLink* find(std::string_view rat_id);
  const std::vector<ParallelLink>& links() const { return links_; }
  bool empty() const { return links_.empty(); }
  std::size_t size() const { return links_.size(); }

 private:
  std::vector<ParallelLink> links_;
};

/// Composite trust over simultaneously active links. Component aggregators:
/// identity max, device max, context mean, network min, policy min. The
/// result is independent of link ordering. Throws ValidationError on an
/// empty link set.
double parallel_compose(const ParallelLinkSet& links, const WeightVector& weights);

struct FlowAssignment {
  std::string flow_id;
  std::string carried_on;  // rat_id of the carrier link
  FlowSensitivity sensitivity = FlowSensitivity::Low;
};

/// Network trust per flow: each flow sees exactly its carrier link's
/// network component. Throws LookupError when a flow's carrier is not an
/// active link.
std::map<std::string, double> per_flow_network_trust(const std::vector<FlowAssignment>& flows,
                                                     const ParallelLinkSet& links);

}  // namespace ztratsim
