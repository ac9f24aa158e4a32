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

#include "ztratsim/mission.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ztratsim/error.hpp"
#include "ztratsim/rng.hpp"

namespace ztratsim {

namespace {

constexpr std::int64_t kCadenceMs = 1000;
constexpr double kDecoyTrustCap = 0.1;

// Simulation-global MAC key. The simulator models artefact validation, not
// key distribution, so every legitimate domain shares one test key.
constexpr MacKey kSimulationKey = {0x7a, 0x74, 0x72, 0x61, 0x74, 0x73, 0x69, 0x6d,
                                   0x2d, 0x6d, 0x61, 0x63, 0x2d, 0x6b, 0x65, 0x79};

std::string join_tags(const std::vector<std::string>& tags) {
  std::string out;
  for (const auto& tag : tags) {
    if (!out.empty()) out += ";";
    out += tag;
  }
  return out;
}

struct LinkRuntime {
  TrustState anchor;  // level at the last verification refresh or crossing
};

class Engine {
 public:
  Engine(const MissionScenario& scenario, const RunOptions& options)
      : scenario_(scenario),
        options_(options),
        rng_(options.seed_override.value_or(scenario.seed)),
        adversary_active_(scenario.has_adversary_actions()) {}

  RunResult execute() {
    if (!scenario_.trajectory.empty()) return run_trajectory();
    return run_events();
  }

 private:
  // --- helpers -------------------------------------------------------------

  const RatProfile& profile(const std::string& rat_id) const {
    return scenario_.profiles.at(rat_id);
  }

  bool is_decoy(const std::string& rat_id) const {
    return env_.decoy(rat_id) != nullptr;
  }

  double ceiling_of(const std::string& rat_id) const {
    return trust_ceiling(profile(rat_id), scenario_.weights);
  }

  TrustState current_primary_state() const { return links_.find(primary_)->state; }

  void set_primary_state(const TrustState& state) { links_.find(primary_)->state = state; }

  double active_energy() const {
    return scenario_.mode == PortabilityMode::Portable ? energy_portable_ : energy_naive_;
  }

  TimelineSample snapshot(std::int64_t t_ms, std::string tag) const {
    TimelineSample sample;
    sample.t_ms = t_ms;
    sample.event = std::move(tag);
    sample.active_rats.push_back(primary_);
    sample.link_states.push_back(current_primary_state());
    for (const auto& link : links_.links()) {
      if (link.rat_id != primary_) {
        sample.active_rats.push_back(link.rat_id);
        sample.link_states.push_back(link.state);
      }
    }
    sample.primary = current_primary_state();
    sample.composite = parallel_compose(links_, scenario_.weights);
    sample.energy_cum_mj = active_energy();
    sample.below_threshold = sample.composite < scenario_.t_min;
    return sample;
  }

  void emit(TimelineSample sample) {
    if (!timeline_.empty() && sample.t_ms <= timeline_.back().t_ms) {
      sample.t_ms = timeline_.back().t_ms + 1;
    }
    timeline_.push_back(std::move(sample));
  }

  void note(const std::string& text) { report_.notes.push_back(text); }

  // --- event handling ------------------------------------------------------

  const DecayParams& effective_decay(const std::string& rat_id) {
    auto it = effective_decay_.find(rat_id);
    if (it != effective_decay_.end()) return it->second;
    DecayParams params = profile(rat_id).decay;
    if (scenario_.remote_id == RemoteIdSignal::Corroborated) {
      // Corroborating broadcasts keep the environment picture current, so
      // contextual trust goes stale more slowly. They are unauthenticated
      // and never raise trust.
      params.lambda_per_min[index_of(TrustComponent::Context)] *= kRemoteIdContextDecayFactor;
    }
    return effective_decay_.emplace(rat_id, std::move(params)).first->second;
  }

  void decay_links(std::int64_t from_ms, std::int64_t to_ms) {
    if (to_ms <= from_ms) return;
    const double dt_min = static_cast<double>(to_ms - from_ms) / 60000.0;
    for (const auto& link : links_.links()) {
      ParallelLink* mutable_link = links_.find(link.rat_id);
      mutable_link->state = decay(mutable_link->state, dt_min, effective_decay(link.rat_id));
    }
  }

  struct ArtefactPresentation {
    TrustComponent component;
    ArtefactDecision decision;
  };

  /// Presents artefacts for the configured components at a crossing.
  /// Pre-staged artefacts from present_artefact events are used first;
  /// otherwise evidence is issued on the spot from the departing domain.
  std::vector<ArtefactPresentation> present_artefacts(const std::string& from,
                                                      const std::string& to,
                                                      const TrustState& pre_state,
                                                      std::int64_t now_ms) {
    std::vector<ArtefactPresentation> out;
    if (!scenario_.portability.enabled) return out;
    const RatProfile& from_profile = profile(from);
    const RatProfile& to_profile = profile(to);
    if (from_profile.trust_silo || to_profile.trust_silo || is_decoy(to)) {
      // Silos neither export nor import trust evidence; rogue domains
      // reject everything anyway.
      return out;
    }
    for (TrustComponent c : scenario_.portability.components) {
      TrustArtefact artefact;
      auto staged = wallet_.find(c);
      if (staged != wallet_.end()) {
        artefact = staged->second;
        wallet_.erase(staged);
      } else {
        artefact = issue_artefact(from, scenario_.device_id, c, pre_state[c], now_ms,
                                  kSimulationKey, rng_);
      }
      const RevocationList* revocations = to_profile.connected ? &revocations_ : nullptr;
      const ArtefactDecision decision =
          validate_artefact(artefact, scenario_.device_id, now_ms,
                            scenario_.portability.freshness_window_s, replay_cache_, revocations,
                            kSimulationKey);
      captured_.push_back(artefact);
      out.push_back({c, decision});
    }
    return out;
  }

  void execute_transition(std::int64_t t_ms, const std::string& to, TransitionKind kind,
                          std::optional<double> cost_naive_override,
                          std::optional<double> cost_portable_override,
                          std::vector<std::string>& tags) {
    const std::string from = primary_;
    const TrustState pre = current_primary_state();
    const double t_s = static_cast<double>(t_ms) / 1000.0;
    const RatProfile& to_profile = profile(to);

    if (pending_forced_) {
      kind = TransitionKind::AdversaryForced;
      pending_forced_ = false;
      tags.push_back("forced-reclassification");
    }

    // Evidence presentation decides which components survive at the
    // improved rate.
    const auto presentations = present_artefacts(from, to, pre, t_ms);
    std::set<TrustComponent> accepted;
    for (const auto& p : presentations) {
      if (p.decision == ArtefactDecision::Accepted) accepted.insert(p.component);
      if (p.decision != ArtefactDecision::Accepted) {
        note("artefact " + std::string(short_name(p.component)) + " at " + from + "->" + to +
             ": " + std::string(decision_name(p.decision)));
      }
    }

    TrustState post;
    for (TrustComponent c : kComponents) {
      double sigma = scenario_.matrices.sigma(c, from, to);
      if (accepted.contains(c)) {
        const double improved = scenario_.portability.improved_sigma[index_of(c)];
        if (improved > sigma) sigma = effective_survival(sigma, ArtefactDecision::Accepted, improved);
      }
      post[c] = sigma * pre[c];
    }

    const double cost_naive =
        cost_naive_override.value_or(recovery_cost(from, to_profile, kind, scenario_.matrices));
    std::optional<double> cost_portable = cost_portable_override;
    if (!cost_portable.has_value() && scenario_.portability.enabled) {
      cost_portable = portable_recovery_cost(from, to_profile, kind, scenario_.matrices, accepted,
                                             scenario_.portability.verify_cost_mj);
    }

    TrustGap gap = sample_trust_gap(kind, t_s, rng_);
    if (!adversary_active_) gap.exploited = false;

    // A target that is already active as a parallel link was authenticated
    // in advance; the data session inherits whichever trust is higher.
    TrustState recovery_base = post;
    if (to != from) {
      if (const ParallelLink* existing = links_.find(to)) {
        for (TrustComponent c : kComponents) {
          recovery_base[c] = std::max(recovery_base[c], existing->state[c]);
        }
      }
    }
    TrustState recovered = clamp_to_ceiling(recover(recovery_base, to_profile), to_profile);
    TrustState entered = adversary_active_ ? exploitation_effect(gap, recovered) : recovered;
    if (is_decoy(to)) {
      for (TrustComponent c : kComponents) entered[c] = std::min(entered[c], kDecoyTrustCap);
      tags.push_back("rogue-capture");
    }
    if (gap.exploited) tags.push_back("gap-exploited");

    // Row at the crossing instant: survival applied, recovery not yet paid.
    {
      ParallelLink* link = links_.find(primary_);
      const TrustState saved = link->state;
      link->state = post;
      std::vector<std::string> row_tags = tags;
      row_tags.insert(row_tags.begin(), "transition:" + from + "->" + to + ":" +
                                            std::string(kind_name(kind)));
      emit(snapshot(t_ms, join_tags(row_tags)));
      link->state = saved;
    }

    // Swap the primary link and pay for recovery.
    links_.remove(from);
    links_.remove(to);  // promote a pre-established parallel link, if any
    runtime_.erase(from);
    ParallelLink new_link;
    new_link.rat_id = to;
    new_link.state = entered;
    new_link.activated_at_ms = t_ms;
    new_link.trust_silo = to_profile.trust_silo;
    new_link.silo_context_value = to_profile.silo_context_value;
    links_.add(new_link);
    primary_ = to;
    runtime_[to] = LinkRuntime{entered};

    energy_naive_ += cost_naive;
    energy_portable_ += cost_portable.value_or(cost_naive);
    any_portable_data_ = any_portable_data_ || cost_portable.has_value();

    CrossingRecord record;
    record.time_s = t_s;
    record.from_rat = from;
    record.to_rat = to;
    record.kind = kind;
    record.pre_state = pre;
    record.post_state = post;
    record.recovered_state = entered;
    record.cost_mj = cost_naive;
    record.portable_cost_mj = cost_portable;
    record.accepted_artefacts.assign(accepted.begin(), accepted.end());
    record.trust_gap_s = gap.duration_s;
    record.gap_exploited = gap.exploited;
    report_.crossings.push_back(record);

    emit(snapshot(t_ms + 1, "recover:" + to));
  }

  void handle_adversary(std::int64_t t_ms, const AdversaryAction& action,
                        std::vector<std::string>& tags) {
    auto ceiling_fn = [this](const std::string& id) { return ceiling_of(id); };
    auto mutual_fn = [this](const std::string& id) { return profile(id).mutual_auth; };
    const auto result = env_.apply_action(action, t_ms, primary_, ceiling_fn, mutual_fn);
    for (const auto& n : result.notes) {
      tags.push_back(n);
      note(n);
    }

    if (const auto* jam = std::get_if<JamAction>(&action.action)) {
      // A jammed parallel link drops; it can be re-established with link_up.
      if (jam->rat != primary_ && links_.contains(jam->rat)) {
        links_.remove(jam->rat);
        runtime_.erase(jam->rat);
        tags.push_back("link-lost:" + jam->rat);
      }
    }

    if (result.reclassify_next) pending_forced_ = true;

    if (result.replay_requested) {
      if (captured_.empty()) {
        note("replay requested but no artefact has been captured");
      } else {
        const std::size_t index =
            result.replay_index >= 0 &&
                    static_cast<std::size_t>(result.replay_index) < captured_.size()
                ? static_cast<std::size_t>(result.replay_index)
                : captured_.size() - 1;
        const TrustArtefact& artefact = captured_[index];
        const RatProfile& domain = profile(primary_);
        const RevocationList* revocations = domain.connected ? &revocations_ : nullptr;
        ArtefactDecision decision = validate_artefact(
            artefact, scenario_.device_id, t_ms, scenario_.portability.freshness_window_s,
            replay_cache_, revocations, kSimulationKey);
        if (is_decoy(primary_)) decision = ArtefactDecision::RejectedIntegrity;
        tags.push_back("replay:" + std::string(decision_name(decision)));
        note("adversary replay of artefact " + std::to_string(index) + ": " +
             std::string(decision_name(decision)));
      }
    }

    if (result.induced_transition.has_value()) {
      const auto& [target, kind] = *result.induced_transition;
      execute_transition(t_ms, target, kind, std::nullopt, std::nullopt, tags);
    }
  }

  void handle_event(std::int64_t t_ms, const ScenarioEvent& event,
                    std::vector<std::string>& tags) {
    if (const auto* transition = std::get_if<TransitionEvent>(&event.payload)) {
      execute_transition(t_ms, transition->to, transition->kind, transition->cost_naive_mj,
                         transition->cost_portable_mj, tags);
      if (transition->cost_naive_mj.has_value()) {
        table_sourced_ += 1;
      } else {
        formula_derived_ += 1;
      }
      return;
    }
    if (const auto* up = std::get_if<LinkUpEvent>(&event.payload)) {
      if (links_.contains(up->rat)) {
        note("link_up ignored: " + up->rat + " already active");
        return;
      }
      const RatProfile& p = profile(up->rat);
      ParallelLink link;
      link.rat_id = up->rat;
      link.state = p.reauth;
      link.activated_at_ms = t_ms;
      link.trust_silo = p.trust_silo;
      link.silo_context_value = p.silo_context_value;
      links_.add(link);
      runtime_[up->rat] = LinkRuntime{p.reauth};
      energy_naive_ += up->cost_mj;
      energy_portable_ += up->cost_mj;
      tags.push_back("link_up:" + up->rat);
      return;
    }
    if (const auto* down = std::get_if<LinkDownEvent>(&event.payload)) {
      if (down->rat == primary_) {
        note("link_down ignored: cannot drop the primary data link " + down->rat);
        return;
      }
      if (links_.remove(down->rat)) {
        runtime_.erase(down->rat);
        tags.push_back("link_down:" + down->rat);
      }
      return;
    }
    if (const auto* trigger = std::get_if<DecayTriggerEvent>(&event.payload)) {
      const auto outcome =
          apply_event_decay(current_primary_state(), trigger->name, profile(primary_).decay);
      if (!outcome.recognized) {
        note("decay event '" + trigger->name + "' not registered on " + primary_ + "; ignored");
      } else {
        set_primary_state(outcome.state);
        // The drop invalidates evidence: verification refresh must not
        // restore above the post-event level.
        LinkRuntime& rt = runtime_[primary_];
        for (TrustComponent c : kComponents) {
          rt.anchor[c] = std::min(rt.anchor[c], outcome.state[c]);
        }
        tags.push_back("decay_event:" + trigger->name);
      }
      return;
    }
    if (const auto* assign = std::get_if<AssignFlowEvent>(&event.payload)) {
      auto it = std::find_if(flows_.begin(), flows_.end(), [&](const FlowAssignment& f) {
        return f.flow_id == assign->flow.flow_id;
      });
      if (it != flows_.end()) {
        *it = assign->flow;
      } else {
        flows_.push_back(assign->flow);
      }
      tags.push_back("assign_flow:" + assign->flow.flow_id);
      return;
    }
    if (const auto* present = std::get_if<PresentArtefactEvent>(&event.payload)) {
      const RatProfile& domain = profile(primary_);
      if (domain.trust_silo) {
        note("present_artefact ignored: " + primary_ + " is a trust silo");
        return;
      }
      const TrustComponent c = present->component;
      wallet_[c] = issue_artefact(primary_, scenario_.device_id, c, current_primary_state()[c],
                                  t_ms, kSimulationKey, rng_);
      tags.push_back("staged:" + std::string(short_name(c)));
      return;
    }
    // Remaining payloads are adversary actions.
    AdversaryAction action;
    action.at_ms = t_ms;
    if (const auto* jam = std::get_if<JamAction>(&event.payload)) {
      action.action = *jam;
    } else if (const auto* rogue = std::get_if<RogueAction>(&event.payload)) {
      action.action = *rogue;
    } else if (const auto* replay = std::get_if<ReplayAction>(&event.payload)) {
      action.action = *replay;
    } else {
      action.action = std::get<ForceTransitionAction>(event.payload);
    }
    handle_adversary(t_ms, action, tags);
  }

  void verify_tick(std::vector<std::string>& tags) {
    const RatProfile& p = profile(primary_);
    ParallelLink* link = links_.find(primary_);
    LinkRuntime& rt = runtime_[primary_];
    for (TrustComponent c : kComponents) {
      // Refresh restores decay up to the last anchored level, and never
      // above what full re-authentication on this RAT attains.
      const double target = std::min(p.reauth[c], rt.anchor[c]);
      link->state[c] = std::max(link->state[c], target);
    }
    rt.anchor = link->state;
    energy_naive_ += p.verify_cost_mj;
    energy_portable_ += p.verify_cost_mj;
    verify_energy_ += p.verify_cost_mj;
    ++verify_count_;
    tags.push_back("verify");
  }

  // --- main loops ----------------------------------------------------------

  RunResult run_events() {
    const auto duration_ms =
        static_cast<std::int64_t>(std::llround(scenario_.duration_min * 60000.0));
    // Sub-millisecond intervals clamp to the 1 ms tick resolution.
    const auto interval_ms = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(scenario_.verify_interval_s * 1000.0)));

    env_ = RfEnvironment{};
    for (const auto& rat : scenario_.rat_order) {
      if (!scenario_.profiles.at(rat).trust_silo) env_.register_rat(rat);
    }
    if (scenario_.remote_id == RemoteIdSignal::Spoofed) {
      note("remote-id: spoofed broadcasts carry no authentication and are ignored");
    }

    // Initial authentication on the start RAT.
    primary_ = scenario_.start_rat;
    const RatProfile& start = profile(primary_);
    TrustState initial = scenario_.initial_state.value_or(start.reauth);
    initial = clamp_to_ceiling(initial, start);
    ParallelLink first;
    first.rat_id = primary_;
    first.state = initial;
    first.trust_silo = start.trust_silo;
    first.silo_context_value = start.silo_context_value;
    links_.add(first);
    runtime_[primary_] = LinkRuntime{initial};
    energy_naive_ = scenario_.initial_auth_mj;
    energy_portable_ = scenario_.initial_auth_portable_mj.value_or(scenario_.initial_auth_mj);
    any_portable_data_ = scenario_.initial_auth_portable_mj.has_value();

    // Sample instants: cadence, events, verification ticks, endpoints.
    std::set<std::int64_t> instants;
    instants.insert(0);
    instants.insert(duration_ms);
    for (std::int64_t t = 0; t <= duration_ms; t += kCadenceMs) instants.insert(t);
    for (const auto& event : scenario_.events) instants.insert(event.t_ms);
    for (std::int64_t t = interval_ms; t <= duration_ms; t += interval_ms) instants.insert(t);

    std::size_t next_event = 0;
    std::int64_t prev_ms = 0;
    bool first_sample = true;

    for (const std::int64_t t_ms : instants) {
      decay_links(prev_ms, t_ms);
      prev_ms = t_ms;

      std::vector<std::string> tags;
      if (first_sample) tags.push_back("start");
      const std::size_t timeline_before = timeline_.size();

      while (next_event < scenario_.events.size() && scenario_.events[next_event].t_ms == t_ms) {
        handle_event(t_ms, scenario_.events[next_event], tags);
        ++next_event;
      }
      if (interval_ms > 0 && t_ms > 0 && t_ms % interval_ms == 0 && t_ms <= duration_ms) {
        verify_tick(tags);
      }

      const bool crossing_rows_emitted = timeline_.size() > timeline_before;
      if (crossing_rows_emitted) {
        // The crossing already produced its pair of rows; append remaining
        // tags (verify, jam notes) to the recovery row.
        if (!tags.empty()) {
          auto& last = timeline_.back();
          std::vector<std::string> merged;
          if (!last.event.empty()) merged.push_back(last.event);
          for (auto& tag : tags) merged.push_back(std::move(tag));
          last.event = join_tags(merged);
        }
      } else {
        emit(snapshot(t_ms, join_tags(tags)));
      }
      first_sample = false;
    }

    finish_report();
    return {std::move(timeline_), std::move(report_)};
  }

  RunResult run_trajectory() {
    for (const TrajectoryPoint& point : scenario_.trajectory) {
      TimelineSample sample;
      sample.t_ms = static_cast<std::int64_t>(std::llround(point.t_min * 60000.0));
      sample.primary = TrustState::uniform(point.composite);
      sample.composite = point.composite;
      sample.energy_cum_mj = 0.0;
      sample.below_threshold = point.composite < scenario_.t_min;
      emit(std::move(sample));
    }
    if (!timeline_.empty()) timeline_.front().event = "start";
    finish_report();
    return {std::move(timeline_), std::move(report_)};
  }

  void integrate_flow_exposure() {
    for (const FlowAssignment& flow : scenario_.flows) {
      FlowExposure exposure;
      exposure.flow_id = flow.flow_id;
      exposure.carried_on = flow.carried_on;
      exposure.sensitivity = flow.sensitivity;
      const double threshold = sensitivity_threshold(flow.sensitivity);

      double below_ms = 0.0;
      for (std::size_t i = 1; i < timeline_.size(); ++i) {
        const auto& a = timeline_[i - 1];
        const auto& b = timeline_[i];
        const double span = static_cast<double>(b.t_ms - a.t_ms);
        const auto carrier_net = [&](const TimelineSample& s) -> std::optional<double> {
          for (std::size_t k = 0; k < s.active_rats.size(); ++k) {
            if (s.active_rats[k] == flow.carried_on && k < s.link_states.size()) {
              return s.link_states[k][TrustComponent::Network];
            }
          }
          return std::nullopt;
        };
        const auto va = carrier_net(a);
        const auto vb = carrier_net(b);
        if (!va.has_value() || !vb.has_value()) {
          below_ms += span;  // carrier inactive or not observable: no trust
          continue;
        }
        const bool below_a = *va < threshold;
        const bool below_b = *vb < threshold;
        if (below_a && below_b) {
          below_ms += span;
        } else if (below_a != below_b) {
          const double theta = (threshold - *va) / (*vb - *va);
          below_ms += below_a ? theta * span : (1.0 - theta) * span;
        }
      }
      exposure.minutes_below = below_ms / 60000.0;
      exposure.flagged = exposure.minutes_below > 0.0;
      report_.flows.push_back(std::move(exposure));
    }
  }

  void run_paper_check() {
    if (!options_.paper_check) return;
    auto computed_value = [&](const std::string& key) -> std::optional<double> {
      const CrossingRecord* first =
          report_.crossings.empty() ? nullptr : &report_.crossings.front();
      if (key == "composite_pre") {
        if (first == nullptr) return std::nullopt;
        return composite_score(first->pre_state, scenario_.weights);
      }
      if (key == "composite_post") {
        if (first == nullptr) return std::nullopt;
        return composite_score(first->post_state, scenario_.weights);
      }
      if (key == "composite_recovered") {
        if (first == nullptr) return std::nullopt;
        return composite_score(first->recovered_state, scenario_.weights);
      }
      if (key == "crossing_cost_mj") {
        if (first == nullptr) return std::nullopt;
        return first->cost_mj;
      }
      if (key == "naive_total_mj") return report_.total_naive_mj;
      if (key == "portable_total_mj") return report_.total_portable_mj;
      if (key == "saving_pct") return report_.saving_pct;
      if (key == "below_threshold_min") return report_.sub_threshold_min;
      if (key == "below_threshold_pct") return report_.sub_threshold_fraction * 100.0;
      return std::nullopt;
    };

    for (const PublishedValue& published : scenario_.published) {
      const auto computed = computed_value(published.key);
      if (!computed.has_value()) {
        note("paper-check: no computed value for '" + published.key + "'");
        continue;
      }
      PaperCheckEntry entry;
      entry.key = published.key;
      entry.published = published.value;
      entry.computed = *computed;
      entry.tolerance = published.tolerance;
      entry.mismatch = std::abs(entry.computed - entry.published) > entry.tolerance;
      report_.paper_check.push_back(entry);
    }
    if (table_sourced_ + formula_derived_ > 0) {
      note("crossing costs: " + std::to_string(table_sourced_) + " table-sourced (overrides), " +
           std::to_string(formula_derived_) + " formula-derived");
    }
  }

  void finish_report() {
    report_.scenario_name = scenario_.name;
    report_.seed = options_.seed_override.value_or(scenario_.seed);
    report_.duration_min = scenario_.duration_min;
    report_.initial_auth_mj = scenario_.initial_auth_mj;
    report_.verification_count = verify_count_;
    report_.verify_interval_s = scenario_.verify_interval_s;
    report_.verify_energy_mj = verify_energy_;

    double crossings_naive = 0.0;
    double crossings_portable = 0.0;
    for (const auto& record : report_.crossings) {
      crossings_naive += record.cost_mj;
      crossings_portable += record.portable_cost_mj.value_or(record.cost_mj);
    }
    report_.total_naive_mj = scenario_.initial_auth_mj + crossings_naive;
    const bool portable_configured = scenario_.mode != PortabilityMode::Naive ||
                                     scenario_.portability.enabled || any_portable_data_;
    if (portable_configured) {
      report_.total_portable_mj =
          scenario_.initial_auth_portable_mj.value_or(scenario_.initial_auth_mj) +
          crossings_portable;
      if (report_.total_naive_mj > 0.0) {
        report_.saving_pct =
            100.0 * (report_.total_naive_mj - *report_.total_portable_mj) / report_.total_naive_mj;
      }
    }

    const auto [minutes, fraction] = sub_threshold_exposure(timeline_, scenario_.t_min);
    report_.sub_threshold_min = minutes;
    report_.sub_threshold_fraction = fraction;

    const double ledger_total = scenario_.trajectory.empty() ? active_energy() : 0.0;
    report_.budget = budget_check(scenario_, ledger_total);

    integrate_flow_exposure();
    run_paper_check();
  }

  const MissionScenario& scenario_;
  RunOptions options_;
  Pcg32 rng_;
  bool adversary_active_ = false;

  std::string primary_;
  ParallelLinkSet links_;
  std::map<std::string, LinkRuntime> runtime_;
  std::vector<FlowAssignment> flows_{scenario_.flows};
  RfEnvironment env_;
  ReplayCache replay_cache_;
  RevocationList revocations_;
  std::map<TrustComponent, TrustArtefact> wallet_;
  std::vector<TrustArtefact> captured_;
  std::map<std::string, DecayParams> effective_decay_;

  double energy_naive_ = 0.0;
  double energy_portable_ = 0.0;
  double verify_energy_ = 0.0;
  int verify_count_ = 0;
  int table_sourced_ = 0;
  int formula_derived_ = 0;
  bool any_portable_data_ = false;
  bool pending_forced_ = false;

  Timeline timeline_;
  MissionReport report_;
};

}  // namespace

RunResult run(const MissionScenario& scenario, const RunOptions& options) {
  Engine engine(scenario, options);
  return engine.execute();
}

double mission_energy(std::span<const CrossingRecord> records, double initial_auth_mj,
                      double verify_energy_mj) {
  double total = initial_auth_mj + verify_energy_mj;
  for (const auto& record : records) total += record.cost_mj;
  return total;
}

double mission_energy(std::span<const CrossingRecord> records, double initial_auth_mj,
                      int verification_count, double per_verification_mj) {
  return mission_energy(records, initial_auth_mj,
                        static_cast<double>(verification_count) * per_verification_mj);
}

BudgetReport budget_check(const MissionScenario& scenario, double total_auth_mj) {
  BudgetReport report;
  report.total_mj = total_auth_mj;
  if (!scenario.budget.has_value()) {
    report.verdict = BudgetVerdict::NotConfigured;
    return report;
  }
  const PowerBudget& b = *scenario.budget;
  report.p_auth_mw = b.p_max_mw - b.p_flight_mw - b.p_payload_mw - b.p_comms_mw;
  report.budget_mj = report.p_auth_mw * scenario.duration_min * 60.0;
  if (report.p_auth_mw < 0.0) {
    report.negative_budget = true;
    report.verdict = BudgetVerdict::Infeasible;
    report.deficit_mj = total_auth_mj - report.budget_mj;
    return report;
  }
  if (total_auth_mj > report.budget_mj) {
    report.verdict = BudgetVerdict::Infeasible;
    report.deficit_mj = total_auth_mj - report.budget_mj;
  } else {
    report.verdict = BudgetVerdict::Feasible;
  }
  return report;
}

std::pair<double, double> sub_threshold_exposure(const Timeline& timeline, double t_min) {
  if (timeline.size() < 2) return {0.0, 0.0};
  double below_ms = 0.0;
  for (std::size_t i = 1; i < timeline.size(); ++i) {
    const double t0 = static_cast<double>(timeline[i - 1].t_ms);
    const double t1 = static_cast<double>(timeline[i].t_ms);
    const double v0 = timeline[i - 1].composite;
    const double v1 = timeline[i].composite;
    const double span = t1 - t0;
    const bool below0 = v0 < t_min;
    const bool below1 = v1 < t_min;
    if (below0 && below1) {
      below_ms += span;
    } else if (below0 != below1) {
      const double theta = (t_min - v0) / (v1 - v0);
      below_ms += below0 ? theta * span : (1.0 - theta) * span;
    }
  }
  const double span_ms =
      static_cast<double>(timeline.back().t_ms - timeline.front().t_ms);
  const double minutes = below_ms / 60000.0;
  const double fraction = span_ms > 0.0 ? below_ms / span_ms : 0.0;
  return {minutes, fraction};
}

}  // namespace ztratsim
