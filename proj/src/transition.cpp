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

#include "ztratsim/transition.hpp"

#include <algorithm>

#include "ztratsim/error.hpp"

namespace ztratsim {

namespace {

constexpr std::array<std::string_view, kTransitionKindCount> kKindNames = {
    "planned", "coverage", "opportunistic", "adversary"};

constexpr std::array<double, kTransitionKindCount> kCostMultipliers = {1.0, 1.3, 0.8, 2.0};

}  // namespace

double cost_multiplier(TransitionKind kind) {
  return kCostMultipliers[static_cast<std::size_t>(kind)];
}

std::string_view kind_name(TransitionKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<TransitionKind> kind_from(std::string_view name) {
  for (std::size_t i = 0; i < kTransitionKindCount; ++i) {
    if (kKindNames[i] == name) return static_cast<TransitionKind>(i);
  }
  return std::nullopt;
}

void SurvivalMatrixSet::register_rat(const std::string& rat_id) {
  if (has_rat(rat_id)) return;
  const std::size_t old_n = rats_.size();
  const std::size_t new_n = old_n + 1;
  rats_.push_back(rat_id);
  for (std::size_t c = 0; c < kComponentCount; ++c) {
    std::vector<double> grown(new_n * new_n, 0.0);
    std::vector<char> grown_set(new_n * new_n, 0);
    for (std::size_t r = 0; r < old_n; ++r) {
      for (std::size_t col = 0; col < old_n; ++col) {
        grown[r * new_n + col] = sigma_[c][r * old_n + col];
        grown_set[r * new_n + col] = set_[c][r * old_n + col];
      }
    }
    sigma_[c] = std::move(grown);
    set_[c] = std::move(grown_set);
  }
}

bool SurvivalMatrixSet::has_rat(std::string_view rat_id) const {
  return std::find(rats_.begin(), rats_.end(), rat_id) != rats_.end();
}

std::size_t SurvivalMatrixSet::rat_index(std::string_view rat_id) const {
  for (std::size_t i = 0; i < rats_.size(); ++i) {
    if (rats_[i] == rat_id) return i;
  }
  throw LookupError("survival matrices: unknown RAT '" + std::string(rat_id) + "'");
}

double SurvivalMatrixSet::sigma(TrustComponent c, std::string_view from,
                                std::string_view to) const {
  const std::size_t f = rat_index(from);
  const std::size_t t = rat_index(to);
  return sigma_[index_of(c)][f * rats_.size() + t];
}

bool SurvivalMatrixSet::is_set(TrustComponent c, std::string_view from,
                               std::string_view to) const {
  const std::size_t f = rat_index(from);
  const std::size_t t = rat_index(to);
  return set_[index_of(c)][f * rats_.size() + t] != 0;
}

void SurvivalMatrixSet::set(TrustComponent c, std::string_view from, std::string_view to,
                            double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError("survival entries must lie in [0,1]");
  }
  const std::size_t f = rat_index(from);
  const std::size_t t = rat_index(to);
  sigma_[index_of(c)][f * rats_.size() + t] = value;
  set_[index_of(c)][f * rats_.size() + t] = 1;
}

TrustState apply_crossing(const TrustState& state, std::string_view from, std::string_view to,
                          const SurvivalMatrixSet& matrices) {
  TrustState out;
  for (TrustComponent c : kComponents) {
    out[c] = matrices.sigma(c, from, to) * state[c];
  }
  return out;
}

double recovery_cost(std::string_view from, const RatProfile& to, TransitionKind kind,
                     const SurvivalMatrixSet& matrices) {
  double deficit_cost = 0.0;
  for (TrustComponent c : kComponents) {
    const double sigma = matrices.sigma(c, from, to.rat_id);
    deficit_cost += to.reauth_cost_mj[index_of(c)] * (1.0 - sigma);
  }
  return cost_multiplier(kind) * deficit_cost;
}

TrustState recover(const TrustState& post_state, const RatProfile& to) {
  TrustState out;
  for (TrustComponent c : kComponents) {
    out[c] = std::min(to.ceiling[c], std::max(post_state[c], to.reauth[c]));
  }
  return out;
}

}  // namespace ztratsim
