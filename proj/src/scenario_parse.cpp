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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ztratsim/defaults.hpp"
#include "ztratsim/scenario.hpp"
#include "ztratsim/text_util.hpp"

namespace ztratsim {

namespace {

using Section = ScenarioDocument::Section;
using KeyValue = ScenarioDocument::KeyValue;

constexpr std::array<std::string_view, 9> kPublishedKeys = {
    "composite_pre",    "composite_post",   "composite_recovered",
    "crossing_cost_mj", "naive_total_mj",   "portable_total_mj",
    "saving_pct",       "below_threshold_min", "below_threshold_pct"};

bool is_known_published_key(std::string_view key) {
  return std::find(kPublishedKeys.begin(), kPublishedKeys.end(), key) != kPublishedKeys.end();
}

/// Half a unit in the last printed decimal digit: "0.821" -> 5e-4,
/// "946" -> 0.5.
double published_tolerance(std::string_view token) {
  const auto dot = token.find('.');
  if (dot == std::string_view::npos) return 0.5;
  const std::size_t decimals = token.size() - dot - 1;
  double tol = 0.5;
  for (std::size_t i = 0; i < decimals; ++i) tol /= 10.0;
  return tol;
}

struct Tokenized {
  ScenarioDocument document;
  std::vector<ParseDiagnostic> diagnostics;
};

Tokenized tokenize(std::string_view text) {
  Tokenized out;
  int line_no = 0;
  std::size_t pos = 0;
  Section* current = nullptr;

  while (pos <= text.size()) {
    if (pos == text.size() && line_no > 0) break;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const auto hash = raw.find('#');
    std::string_view line = hash == std::string_view::npos ? raw : raw.substr(0, hash);
    std::string_view body = trim(line);
    if (body.empty()) {
      if (pos > text.size()) break;
      continue;
    }

    if (body.front() == '[') {
      const auto close = body.find(']');
      if (close == std::string_view::npos || trim(body.substr(close + 1)).size() != 0) {
        out.diagnostics.push_back({ParseDiagnostic::Severity::Error, line_no, 1,
                                   "malformed section header", std::string(body)});
        current = nullptr;
        continue;
      }
      const auto inside = trim(body.substr(1, close - 1));
      const auto tokens = split_ws(inside);
      if (tokens.empty() || tokens.size() > 2) {
        out.diagnostics.push_back({ParseDiagnostic::Severity::Error, line_no, 1,
                                   "section header must be [name] or [name arg]",
                                   std::string(inside)});
        current = nullptr;
        continue;
      }
      Section section;
      section.name = std::string(tokens[0]);
      if (tokens.size() == 2) section.arg = std::string(tokens[1]);
      section.line = line_no;
      out.document.sections.push_back(std::move(section));
      current = &out.document.sections.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      out.diagnostics.push_back({ParseDiagnostic::Severity::Error, line_no, 1,
                                 "expected 'key = value'", std::string(body)});
      continue;
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      out.diagnostics.push_back({ParseDiagnostic::Severity::Error, line_no, 1,
                                 "empty key before '='", std::string(body)});
      continue;
    }
    if (current == nullptr) {
      out.diagnostics.push_back({ParseDiagnostic::Severity::Error, line_no, 1,
                                 "entry outside any section", std::string(key)});
      continue;
    }
    KeyValue kv;
    kv.key = std::string(key);
    kv.value = std::string(value);
    kv.line = line_no;
    kv.column = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    current->entries.push_back(std::move(kv));

    if (pos > text.size()) break;
  }
  return out;
}

enum class ResolveMode { Scenario, DataFile };

class Resolver {
 public:
  Resolver(const ScenarioDocument& document, const DefaultData& defaults, ResolveMode mode)
      : doc_(document), mode_(mode) {
    scenario_.rat_order = defaults.rat_order;
    scenario_.profiles = defaults.profiles;
    scenario_.portability = defaults.portability;
    scenario_.ladder = defaults.ladder;
    defaults_matrices_ = &defaults.matrices;
  }

  std::vector<ParseDiagnostic> take_diagnostics() { return std::move(diagnostics_); }
  bool has_errors() const {
    return std::any_of(diagnostics_.begin(), diagnostics_.end(), [](const ParseDiagnostic& d) {
      return d.severity == ParseDiagnostic::Severity::Error;
    });
  }

  std::optional<MissionScenario> resolve() {
    check_section_multiplicity();
    for (const Section& s : doc_.sections) {
      if (s.name == "mission") resolve_mission(s);
    }
    for (const Section& s : doc_.sections) {
      if (s.name == "rat") resolve_rat(s);
    }
    apply_rat_filter();
    rebuild_matrices();
    for (const Section& s : doc_.sections) {
      if (s.name == "survival") resolve_survival(s);
    }
    for (const Section& s : doc_.sections) {
      if (s.name == "portability") resolve_portability(s);
    }
    for (const Section& s : doc_.sections) {
      if (s.name == "flows") resolve_flows(s);
      else if (s.name == "trajectory") resolve_trajectory(s);
      else if (s.name == "published") resolve_published(s);
      else if (s.name == "event") resolve_event(s);
      else if (s.name != "mission" && s.name != "rat" && s.name != "survival" &&
               s.name != "portability") {
        error(s.line, 1, "unknown section '" + s.name + "'", s.name);
      }
    }
    finalize();
    if (has_errors()) return std::nullopt;
    return std::move(scenario_);
  }

 private:
  void error(int line, int column, const std::string& message, std::string token = {}) {
    diagnostics_.push_back(
        {ParseDiagnostic::Severity::Error, line, column, message, std::move(token)});
  }
  void warning(int line, int column, const std::string& message, std::string token = {}) {
    diagnostics_.push_back(
        {ParseDiagnostic::Severity::Warning, line, column, message, std::move(token)});
  }

  bool rat_declared(std::string_view id) const { return scenario_.profiles.contains(std::string(id)); }

  std::optional<double> number(const KeyValue& kv) {
    auto v = parse_double(kv.value);
    if (!v.has_value()) error(kv.line, kv.column, "not a number: '" + kv.value + "'", kv.value);
    return v;
  }

  std::optional<std::array<double, kComponentCount>> vector5(const KeyValue& kv) {
    const auto tokens = split_ws(kv.value);
    if (tokens.size() != kComponentCount) {
      error(kv.line, kv.column,
            "expected 5 numbers in component order (id dev ctx net pol)", kv.value);
      return std::nullopt;
    }
    std::array<double, kComponentCount> out{};
    for (std::size_t i = 0; i < kComponentCount; ++i) {
      auto v = parse_double(tokens[i]);
      if (!v.has_value()) {
        error(kv.line, kv.column, "not a number: '" + std::string(tokens[i]) + "'",
              std::string(tokens[i]));
        return std::nullopt;
      }
      out[i] = *v;
    }
    return out;
  }

  std::optional<bool> boolean(const KeyValue& kv) {
    if (kv.value == "true") return true;
    if (kv.value == "false") return false;
    error(kv.line, kv.column, "expected true or false", kv.value);
    return std::nullopt;
  }

  void check_section_multiplicity() {
    std::map<std::string, int> seen;  // section identity -> first line
    for (const Section& s : doc_.sections) {
      std::string identity = s.name;
      if (s.name == "rat") identity += " " + s.arg;
      if (s.name == "event" || s.name == "survival") continue;  // repeatable
      auto [it, inserted] = seen.try_emplace(identity, s.line);
      if (!inserted) {
        if (s.name == "rat") {
          error(s.line, 1, "duplicate rat_id '" + s.arg + "' (first declared on line " +
                               std::to_string(it->second) + ")",
                s.arg);
        } else {
          error(s.line, 1, "duplicate [" + s.name + "] section (first on line " +
                               std::to_string(it->second) + ")",
                s.name);
        }
      }
    }
  }

  void resolve_mission(const Section& s) {
    if (mode_ == ResolveMode::DataFile) {
      error(s.line, 1, "[mission] is not allowed in a data file");
      return;
    }
    saw_mission_ = true;
    for (const KeyValue& kv : s.entries) {
      if (kv.key == "name") {
        scenario_.name = kv.value;
      } else if (kv.key == "duration_min") {
        if (auto v = number(kv)) {
          if (*v <= 0.0) error(kv.line, kv.column, "duration must be > 0", kv.value);
          scenario_.duration_min = *v;
        }
      } else if (kv.key == "weights") {
        if (auto v = vector5(kv)) {
          WeightVector w{*v};
          if (!w.valid()) {
            double sum = 0.0;
            for (double x : *v) sum += x;
            std::ostringstream os;
            os << "weights sum " << format_double_shortest(sum) << " != 1 (or non-positive entry)";
            error(kv.line, kv.column, os.str(), kv.value);
          }
          scenario_.weights = w;
        }
      } else if (kv.key == "t_min") {
        if (auto v = number(kv)) {
          if (!(*v >= 0.0 && *v <= 1.0)) error(kv.line, kv.column, "t_min must lie in [0,1]", kv.value);
          scenario_.t_min = *v;
        }
      } else if (kv.key == "verify_interval_s") {
        if (auto v = number(kv)) {
          if (*v <= 0.0) error(kv.line, kv.column, "verify interval must be > 0", kv.value);
          scenario_.verify_interval_s = *v;
        }
      } else if (kv.key == "seed") {
        if (auto v = parse_int(kv.value); v.has_value() && *v >= 0) {
          scenario_.seed = static_cast<std::uint64_t>(*v);
        } else {
          error(kv.line, kv.column, "seed must be a non-negative integer", kv.value);
        }
      } else if (kv.key == "device_id") {
        scenario_.device_id = kv.value;
      } else if (kv.key == "rats") {
        rat_filter_ = std::vector<std::string>{};
        for (const auto token : split_ws(kv.value)) rat_filter_->emplace_back(token);
        rat_filter_line_ = kv.line;
        if (rat_filter_->empty()) {
          error(kv.line, kv.column, "rats list cannot be empty", kv.value);
        }
      } else if (kv.key == "start_rat") {
        scenario_.start_rat = kv.value;
        start_rat_line_ = kv.line;
      } else if (kv.key == "initial_state") {
        if (auto v = vector5(kv)) {
          TrustState st{*v};
          if (!st.in_unit_range()) {
            error(kv.line, kv.column, "initial_state components must lie in [0,1]", kv.value);
          }
          scenario_.initial_state = st;
        }
      } else if (kv.key == "initial_auth_mj") {
        if (auto v = number(kv)) {
          if (*v < 0.0) error(kv.line, kv.column, "initial auth energy must be >= 0", kv.value);
          scenario_.initial_auth_mj = *v;
        }
      } else if (kv.key == "initial_auth_portable_mj") {
        if (auto v = number(kv)) {
          if (*v < 0.0) error(kv.line, kv.column, "initial auth energy must be >= 0", kv.value);
          scenario_.initial_auth_portable_mj = *v;
        }
      } else if (kv.key == "portability") {
        if (auto m = portability_mode_from(kv.value)) {
          scenario_.mode = *m;
        } else {
          error(kv.line, kv.column, "portability must be naive, portable, or both", kv.value);
        }
      } else if (kv.key == "remote_id") {
        if (auto r = remote_id_from(kv.value)) {
          scenario_.remote_id = *r;
        } else {
          error(kv.line, kv.column, "remote_id must be absent, corroborated, or spoofed",
                kv.value);
        }
      } else if (kv.key == "p_max_mw" || kv.key == "p_flight_mw" || kv.key == "p_payload_mw" ||
                 kv.key == "p_comms_mw") {
        if (auto v = number(kv)) {
          if (!budget_.has_value()) budget_ = PowerBudget{};
          budget_keys_.insert(kv.key);
          if (kv.key == "p_max_mw") budget_->p_max_mw = *v;
          if (kv.key == "p_flight_mw") budget_->p_flight_mw = *v;
          if (kv.key == "p_payload_mw") budget_->p_payload_mw = *v;
          if (kv.key == "p_comms_mw") budget_->p_comms_mw = *v;
          budget_line_ = kv.line;
        }
      } else {
        error(kv.line, kv.column, "unknown key '" + kv.key + "' in [mission]", kv.key);
      }
    }
  }

  void resolve_rat(const Section& s) {
    if (s.arg.empty()) {
      error(s.line, 1, "[rat] section requires an id: [rat <id>]");
      return;
    }
    const std::string& id = s.arg;
    const bool is_new = !scenario_.profiles.contains(id);
    RatProfile& profile = scenario_.profiles[id];
    if (is_new) {
      profile.rat_id = id;
      scenario_.rat_order.push_back(id);
    }
    bool saw_family = false;
    bool saw_ceiling = false;
    bool saw_reauth = false;
    bool saw_decay = false;

    for (const KeyValue& kv : s.entries) {
      if (kv.key == "family") {
        if (auto f = family_from(kv.value)) {
          profile.family = *f;
          saw_family = true;
        } else {
          error(kv.line, kv.column, "unknown RAT family '" + kv.value + "'", kv.value);
        }
      } else if (kv.key == "ceiling") {
        if (auto v = vector5(kv)) {
          profile.ceiling = TrustState{*v};
          saw_ceiling = true;
          if (!profile.ceiling.in_unit_range()) {
            error(kv.line, kv.column, "ceiling components must lie in [0,1]", kv.value);
          }
        }
      } else if (kv.key == "reauth") {
        if (auto v = vector5(kv)) {
          profile.reauth = TrustState{*v};
          saw_reauth = true;
        }
      } else if (kv.key == "cost_mj") {
        if (auto v = vector5(kv)) profile.reauth_cost_mj = *v;
      } else if (kv.key == "verify_mj") {
        if (auto v = number(kv)) profile.verify_cost_mj = *v;
      } else if (kv.key == "decay") {
        if (auto v = vector5(kv)) {
          profile.decay.lambda_per_min = *v;
          saw_decay = true;
        }
      } else if (kv.key == "shape") {
        if (auto v = vector5(kv)) profile.decay.shape = *v;
      } else if (kv.key == "mutual_auth") {
        if (auto v = boolean(kv)) profile.mutual_auth = *v;
      } else if (kv.key == "trust_silo") {
        if (auto v = boolean(kv)) profile.trust_silo = *v;
      } else if (kv.key == "connected") {
        if (auto v = boolean(kv)) profile.connected = *v;
      } else if (kv.key == "silo_ctx") {
        if (auto v = number(kv)) profile.silo_context_value = *v;
      } else if (kv.key == "decay_event") {
        const auto tokens = split_ws(kv.value);
        if (tokens.size() != 3) {
          error(kv.line, kv.column, "decay_event expects '<name> <component> <factor>'", kv.value);
          continue;
        }
        auto comp = component_from(tokens[1]);
        auto factor = parse_double(tokens[2]);
        if (!comp.has_value()) {
          error(kv.line, kv.column, "unknown component '" + std::string(tokens[1]) + "'",
                std::string(tokens[1]));
          continue;
        }
        if (!factor.has_value() || !(*factor >= 0.0 && *factor <= 1.0)) {
          error(kv.line, kv.column, "drop factor must lie in [0,1]", std::string(tokens[2]));
          continue;
        }
        profile.decay.event_triggers[std::string(tokens[0])].push_back({*comp, *factor});
      } else {
        error(kv.line, kv.column, "unknown key '" + kv.key + "' in [rat]", kv.key);
      }
    }

    if (is_new) {
      if (!saw_family) error(s.line, 1, "new RAT '" + id + "' requires a family", id);
      if (!saw_ceiling) error(s.line, 1, "new RAT '" + id + "' requires a ceiling", id);
      if (!saw_reauth) {
        for (TrustComponent c : kComponents) profile.reauth[c] = 0.9 * profile.ceiling[c];
      }
      if (!saw_decay) profile.decay.lambda_per_min = default_decay_rates(profile.family);
    }

    for (const std::string& problem : validate_profile(profile)) {
      error(s.line, 1, problem, id);
    }
  }

  // Restricts the modeled world to the RATs named by the mission `rats`
  // key. Everything else (defaults included) is dropped before the
  // matrices are assembled.
  void apply_rat_filter() {
    if (!rat_filter_.has_value()) return;
    std::set<std::string> keep;
    for (const std::string& id : *rat_filter_) {
      if (!scenario_.profiles.contains(id)) {
        error(rat_filter_line_, 1, "rats entry '" + id + "' is not a declared RAT", id);
      } else {
        keep.insert(id);
      }
    }
    std::vector<std::string> pruned_order;
    for (const std::string& id : scenario_.rat_order) {
      if (keep.contains(id)) pruned_order.push_back(id);
    }
    scenario_.rat_order = std::move(pruned_order);
    for (auto it = scenario_.profiles.begin(); it != scenario_.profiles.end();) {
      if (keep.contains(it->first)) {
        ++it;
      } else {
        it = scenario_.profiles.erase(it);
      }
    }
    if (scenario_.ladder.has_value() &&
        (!keep.contains(scenario_.ladder->from) || !keep.contains(scenario_.ladder->to))) {
      scenario_.ladder.reset();
    }
  }

  void rebuild_matrices() {
    SurvivalMatrixSet m;
    for (const std::string& id : scenario_.rat_order) m.register_rat(id);
    if (defaults_matrices_ != nullptr) {
      for (const std::string& from : defaults_matrices_->rats()) {
        for (const std::string& to : defaults_matrices_->rats()) {
          for (TrustComponent c : kComponents) {
            if (defaults_matrices_->is_set(c, from, to) && m.has_rat(from) && m.has_rat(to)) {
              m.set(c, from, to, defaults_matrices_->sigma(c, from, to));
            }
          }
        }
      }
    }
    fill_survival_defaults(m, scenario_.profiles);
    scenario_.matrices = std::move(m);
  }

  void resolve_survival(const Section& s) {
    auto comp = component_from(s.arg);
    if (!comp.has_value()) {
      error(s.line, 1, "unknown survival component '" + s.arg + "' (id dev ctx net pol)", s.arg);
      return;
    }
    for (const KeyValue& kv : s.entries) {
      const auto dot = kv.key.find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == kv.key.size()) {
        error(kv.line, kv.column, "survival entries use 'from.to = value'", kv.key);
        continue;
      }
      const std::string from = kv.key.substr(0, dot);
      const std::string to = kv.key.substr(dot + 1);
      if (!rat_declared(from)) {
        error(kv.line, kv.column, "survival entry references undeclared RAT '" + from + "'", from);
        continue;
      }
      if (!rat_declared(to)) {
        error(kv.line, kv.column, "survival entry references undeclared RAT '" + to + "'", to);
        continue;
      }
      auto v = number(kv);
      if (!v.has_value()) continue;
      if (!(*v >= 0.0 && *v <= 1.0)) {
        error(kv.line, kv.column, "survival value outside [0,1]", kv.value);
        continue;
      }
      scenario_.matrices.set(*comp, from, to, *v);
    }
  }

  void resolve_portability(const Section& s) {
    PortabilityConfig& cfg = scenario_.portability;
    bool saw_ladder_key = false;
    PortabilityLadder ladder = scenario_.ladder.value_or(PortabilityLadder{});
    for (const KeyValue& kv : s.entries) {
      if (kv.key == "enabled") {
        if (auto v = boolean(kv)) cfg.enabled = *v;
      } else if (kv.key == "components") {
        cfg.components.clear();
        for (const auto token : split_ws(kv.value)) {
          if (auto c = component_from(token)) {
            cfg.components.insert(*c);
          } else {
            error(kv.line, kv.column, "unknown component '" + std::string(token) + "'",
                  std::string(token));
          }
        }
      } else if (kv.key.starts_with("improved_")) {
        auto c = component_from(std::string_view(kv.key).substr(9));
        if (!c.has_value()) {
          error(kv.line, kv.column, "unknown key '" + kv.key + "' in [portability]", kv.key);
          continue;
        }
        if (auto v = number(kv)) {
          if (!(*v >= 0.0 && *v <= 1.0)) {
            error(kv.line, kv.column, "improved survival must lie in [0,1]", kv.value);
          }
          cfg.improved_sigma[index_of(*c)] = *v;
        }
      } else if (kv.key == "verify_mj") {
        if (auto v = vector5(kv)) {
          for (double x : *v) {
            if (x < 0.0) error(kv.line, kv.column, "verify costs must be >= 0", kv.value);
          }
          cfg.verify_cost_mj = *v;
        }
      } else if (kv.key == "freshness_window_s") {
        if (auto v = number(kv)) {
          if (*v <= 0.0) error(kv.line, kv.column, "freshness window must be > 0", kv.value);
          cfg.freshness_window_s = *v;
        }
      } else if (kv.key == "ladder_from") {
        ladder.from = kv.value;
        saw_ladder_key = true;
      } else if (kv.key == "ladder_to") {
        ladder.to = kv.value;
        saw_ladder_key = true;
      } else if (kv.key == "ladder_kind") {
        if (auto k = kind_from(kv.value)) {
          ladder.kind = *k;
          saw_ladder_key = true;
        } else {
          error(kv.line, kv.column, "unknown transition kind '" + kv.value + "'", kv.value);
        }
      } else if (kv.key == "ladder_cost_mj" || kv.key == "ladder_verify_mj" ||
                 kv.key == "ladder_latency_ms" || kv.key == "ladder_verify_latency_ms") {
        if (auto v = vector5(kv)) {
          for (double x : *v) {
            if (x < 0.0) error(kv.line, kv.column, "ladder values must be >= 0", kv.value);
          }
          if (kv.key == "ladder_cost_mj") ladder.cost_mj = *v;
          if (kv.key == "ladder_verify_mj") ladder.verify_mj = *v;
          if (kv.key == "ladder_latency_ms") ladder.latency_ms = *v;
          if (kv.key == "ladder_verify_latency_ms") ladder.verify_latency_ms = *v;
          saw_ladder_key = true;
        }
      } else {
        error(kv.line, kv.column, "unknown key '" + kv.key + "' in [portability]", kv.key);
      }
    }
    if (saw_ladder_key) {
      if (!rat_declared(ladder.from)) {
        error(s.line, 1, "ladder references undeclared RAT '" + ladder.from + "'", ladder.from);
      } else if (!rat_declared(ladder.to)) {
        error(s.line, 1, "ladder references undeclared RAT '" + ladder.to + "'", ladder.to);
      } else {
        scenario_.ladder = ladder;
      }
    }
  }

  void resolve_event(const Section& s) {
    if (mode_ == ResolveMode::DataFile) {
      error(s.line, 1, "[event] is not allowed in a data file");
      return;
    }
    std::map<std::string, const KeyValue*> kvs;
    for (const KeyValue& kv : s.entries) {
      if (!kvs.try_emplace(kv.key, &kv).second) {
        error(kv.line, kv.column, "duplicate key '" + kv.key + "' in [event]", kv.key);
      }
    }
    auto take = [&](std::string_view key) -> const KeyValue* {
      auto it = kvs.find(std::string(key));
      if (it == kvs.end()) return nullptr;
      const KeyValue* kv = it->second;
      kvs.erase(it);
      return kv;
    };

    const KeyValue* type_kv = take("type");
    if (type_kv == nullptr) {
      error(s.line, 1, "[event] requires a type");
      return;
    }
    const KeyValue* t_kv = take("t_s");
    if (t_kv == nullptr) {
      error(s.line, 1, "[event] requires t_s");
      return;
    }
    auto t_s = parse_double(t_kv->value);
    if (!t_s.has_value() || *t_s < 0.0) {
      error(t_kv->line, t_kv->column, "t_s must be a non-negative number", t_kv->value);
      return;
    }

    ScenarioEvent event;
    event.t_ms = static_cast<std::int64_t>(std::llround(*t_s * 1000.0));
    event.source_line = s.line;
    const std::string& type = type_kv->value;

    auto require_rat = [&](const KeyValue* kv, bool allow_decoy) -> std::optional<std::string> {
      if (kv == nullptr) return std::nullopt;
      const bool known = rat_declared(kv->value) ||
                         (allow_decoy && decoy_ids_.contains(kv->value));
      if (!known) {
        error(kv->line, kv->column, "event references undeclared RAT '" + kv->value + "'",
              kv->value);
        return std::nullopt;
      }
      return kv->value;
    };

    bool valid = true;
    if (type == "transition") {
      TransitionEvent t;
      const KeyValue* to = take("to");
      if (to == nullptr) {
        error(s.line, 1, "transition event requires 'to'");
        valid = false;
      } else if (auto id = require_rat(to, false)) {
        t.to = *id;
        if (scenario_.profiles.at(t.to).trust_silo) {
          error(to->line, to->column,
                "transition target '" + t.to + "' is a trust silo; use link_up for silo links",
                t.to);
          valid = false;
        }
      } else {
        valid = false;
      }
      if (const KeyValue* kind = take("kind")) {
        if (auto k = kind_from(kind->value)) {
          t.kind = *k;
        } else {
          error(kind->line, kind->column, "unknown transition kind '" + kind->value + "'",
                kind->value);
          valid = false;
        }
      }
      for (const auto& [key, slot] :
           {std::pair{"cost_naive_mj", &t.cost_naive_mj},
            std::pair{"cost_portable_mj", &t.cost_portable_mj}}) {
        if (const KeyValue* kv = take(key)) {
          if (auto v = number(*kv)) {
            if (*v < 0.0) {
              error(kv->line, kv->column, "cost overrides must be >= 0", kv->value);
              valid = false;
            }
            *slot = *v;
          }
        }
      }
      event.payload = std::move(t);
    } else if (type == "jam") {
      JamAction jam;
      if (const KeyValue* rat = take("rat"); rat == nullptr) {
        error(s.line, 1, "jam event requires 'rat'");
        valid = false;
      } else if (auto id = require_rat(rat, true)) {
        jam.rat = *id;
      } else {
        valid = false;
      }
      if (const KeyValue* kv = take("duration_s")) {
        if (auto v = number(*kv)) {
          if (*v <= 0.0) {
            error(kv->line, kv->column, "jam duration must be > 0", kv->value);
            valid = false;
          }
          jam.duration_s = *v;
        }
      } else {
        error(s.line, 1, "jam event requires 'duration_s'");
        valid = false;
      }
      event.payload = std::move(jam);
    } else if (type == "rogue") {
      RogueAction rogue;
      const KeyValue* fake = take("fake");
      if (fake == nullptr) {
        error(s.line, 1, "rogue event requires 'fake'");
        valid = false;
      } else if (rat_declared(fake->value) || decoy_ids_.contains(fake->value)) {
        error(fake->line, fake->column, "rogue id '" + fake->value + "' collides with a declared RAT",
              fake->value);
        valid = false;
      } else {
        rogue.fake_id = fake->value;
      }
      if (const KeyValue* mimics = take("mimics"); mimics == nullptr) {
        error(s.line, 1, "rogue event requires 'mimics'");
        valid = false;
      } else if (auto id = require_rat(mimics, false)) {
        rogue.mimics = *id;
      } else {
        valid = false;
      }
      if (valid) decoy_ids_.insert(rogue.fake_id);
      event.payload = std::move(rogue);
    } else if (type == "replay_artefact") {
      ReplayAction replay;
      if (const KeyValue* kv = take("index")) {
        if (auto v = parse_int(kv->value); v.has_value() && *v >= 0) {
          replay.artefact_index = static_cast<int>(*v);
        } else {
          error(kv->line, kv->column, "index must be a non-negative integer", kv->value);
          valid = false;
        }
      }
      event.payload = replay;
    } else if (type == "force_transition") {
      ForceTransitionAction force;
      if (const KeyValue* to = take("to"); to == nullptr) {
        error(s.line, 1, "force_transition event requires 'to'");
        valid = false;
      } else if (auto id = require_rat(to, false)) {
        force.target = *id;
      } else {
        valid = false;
      }
      event.payload = std::move(force);
    } else if (type == "link_up") {
      LinkUpEvent up;
      if (const KeyValue* rat = take("rat"); rat == nullptr) {
        error(s.line, 1, "link_up event requires 'rat'");
        valid = false;
      } else if (auto id = require_rat(rat, false)) {
        up.rat = *id;
      } else {
        valid = false;
      }
      if (const KeyValue* kv = take("cost_mj")) {
        if (auto v = number(*kv)) {
          if (*v < 0.0) {
            error(kv->line, kv->column, "link_up cost must be >= 0", kv->value);
            valid = false;
          }
          up.cost_mj = *v;
        }
      }
      event.payload = std::move(up);
    } else if (type == "link_down") {
      LinkDownEvent down;
      if (const KeyValue* rat = take("rat"); rat == nullptr) {
        error(s.line, 1, "link_down event requires 'rat'");
        valid = false;
      } else if (auto id = require_rat(rat, false)) {
        down.rat = *id;
      } else {
        valid = false;
      }
      event.payload = std::move(down);
    } else if (type == "decay_event") {
      DecayTriggerEvent trigger;
      if (const KeyValue* kv = take("name")) {
        trigger.name = kv->value;
      } else {
        error(s.line, 1, "decay_event requires 'name'");
        valid = false;
      }
      event.payload = std::move(trigger);
    } else if (type == "assign_flow") {
      AssignFlowEvent assign;
      if (const KeyValue* kv = take("flow")) {
        assign.flow.flow_id = kv->value;
      } else {
        error(s.line, 1, "assign_flow requires 'flow'");
        valid = false;
      }
      if (const KeyValue* rat = take("rat"); rat == nullptr) {
        error(s.line, 1, "assign_flow requires 'rat'");
        valid = false;
      } else if (auto id = require_rat(rat, false)) {
        assign.flow.carried_on = *id;
      } else {
        valid = false;
      }
      if (const KeyValue* kv = take("sensitivity")) {
        if (auto sens = sensitivity_from(kv->value)) {
          assign.flow.sensitivity = *sens;
        } else {
          error(kv->line, kv->column, "sensitivity must be low, medium, or high", kv->value);
          valid = false;
        }
      }
      event.payload = std::move(assign);
    } else if (type == "present_artefact") {
      PresentArtefactEvent present;
      if (const KeyValue* kv = take("component")) {
        if (auto c = component_from(kv->value)) {
          present.component = *c;
        } else {
          error(kv->line, kv->column, "unknown component '" + kv->value + "'", kv->value);
          valid = false;
        }
      } else {
        error(s.line, 1, "present_artefact requires 'component'");
        valid = false;
      }
      event.payload = present;
    } else {
      error(type_kv->line, type_kv->column, "unknown event type '" + type + "'", type);
      return;
    }

    for (const auto& [key, kv] : kvs) {
      error(kv->line, kv->column, "unknown key '" + key + "' for event type '" + type + "'", key);
      valid = false;
    }
    if (valid) scenario_.events.push_back(std::move(event));
  }

  void resolve_flows(const Section& s) {
    if (mode_ == ResolveMode::DataFile) {
      error(s.line, 1, "[flows] is not allowed in a data file");
      return;
    }
    for (const KeyValue& kv : s.entries) {
      if (kv.key != "flow") {
        error(kv.line, kv.column, "unknown key '" + kv.key + "' in [flows]", kv.key);
        continue;
      }
      const auto tokens = split_ws(kv.value);
      if (tokens.size() != 3) {
        error(kv.line, kv.column, "flow expects '<id> <rat> <sensitivity>'", kv.value);
        continue;
      }
      FlowAssignment flow;
      flow.flow_id = std::string(tokens[0]);
      flow.carried_on = std::string(tokens[1]);
      if (!rat_declared(flow.carried_on)) {
        error(kv.line, kv.column, "flow references undeclared RAT '" + flow.carried_on + "'",
              flow.carried_on);
        continue;
      }
      auto sens = sensitivity_from(tokens[2]);
      if (!sens.has_value()) {
        error(kv.line, kv.column, "sensitivity must be low, medium, or high",
              std::string(tokens[2]));
        continue;
      }
      flow.sensitivity = *sens;
      const bool duplicate = std::any_of(
          scenario_.flows.begin(), scenario_.flows.end(),
          [&](const FlowAssignment& f) { return f.flow_id == flow.flow_id; });
      if (duplicate) {
        error(kv.line, kv.column, "duplicate flow id '" + flow.flow_id + "'", flow.flow_id);
        continue;
      }
      scenario_.flows.push_back(std::move(flow));
    }
  }

  void resolve_trajectory(const Section& s) {
    if (mode_ == ResolveMode::DataFile) {
      error(s.line, 1, "[trajectory] is not allowed in a data file");
      return;
    }
    for (const KeyValue& kv : s.entries) {
      if (kv.key != "point") {
        error(kv.line, kv.column, "unknown key '" + kv.key + "' in [trajectory]", kv.key);
        continue;
      }
      const auto tokens = split_ws(kv.value);
      if (tokens.size() != 2) {
        error(kv.line, kv.column, "point expects '<t_min> <composite>'", kv.value);
        continue;
      }
      auto t = parse_double(tokens[0]);
      auto c = parse_double(tokens[1]);
      if (!t.has_value() || !c.has_value()) {
        error(kv.line, kv.column, "point expects two numbers", kv.value);
        continue;
      }
      if (*t < 0.0) error(kv.line, kv.column, "trajectory time must be >= 0", kv.value);
      if (!(*c >= 0.0 && *c <= 1.0)) {
        error(kv.line, kv.column, "trajectory composite must lie in [0,1]", kv.value);
      }
      scenario_.trajectory.push_back({*t, *c});
    }
  }

  void resolve_published(const Section& s) {
    if (mode_ == ResolveMode::DataFile) {
      error(s.line, 1, "[published] is not allowed in a data file");
      return;
    }
    for (const KeyValue& kv : s.entries) {
      if (!is_known_published_key(kv.key)) {
        error(kv.line, kv.column, "unknown key '" + kv.key + "' in [published]", kv.key);
        continue;
      }
      auto v = number(kv);
      if (!v.has_value()) continue;
      const bool duplicate = std::any_of(
          scenario_.published.begin(), scenario_.published.end(),
          [&](const PublishedValue& p) { return p.key == kv.key; });
      if (duplicate) {
        error(kv.line, kv.column, "duplicate published key '" + kv.key + "'", kv.key);
        continue;
      }
      scenario_.published.push_back({kv.key, *v, published_tolerance(kv.value)});
    }
  }

  void register_decoys() {
    // Decoys clone the mimicked RAT's profile and matrix rows/columns; the
    // engine caps trust on them separately.
    for (const ScenarioEvent& event : scenario_.events) {
      const auto* rogue = std::get_if<RogueAction>(&event.payload);
      if (rogue == nullptr || scenario_.profiles.contains(rogue->fake_id)) continue;
      RatProfile clone = scenario_.profiles.at(rogue->mimics);
      clone.rat_id = rogue->fake_id;
      scenario_.profiles.emplace(rogue->fake_id, std::move(clone));
      scenario_.rat_order.push_back(rogue->fake_id);
      scenario_.matrices.register_rat(rogue->fake_id);
      for (const std::string& other : scenario_.rat_order) {
        if (other == rogue->fake_id) continue;
        for (TrustComponent c : kComponents) {
          scenario_.matrices.set(c, rogue->fake_id, other,
                                 scenario_.matrices.sigma(c, rogue->mimics, other));
          scenario_.matrices.set(c, other, rogue->fake_id,
                                 scenario_.matrices.sigma(c, other, rogue->mimics));
        }
      }
      for (TrustComponent c : kComponents) {
        scenario_.matrices.set(c, rogue->fake_id, rogue->fake_id,
                               scenario_.matrices.sigma(c, rogue->mimics, rogue->mimics));
      }
    }
  }

  // Improved-survival values below the base survival of a particular pair
  // are not a load error: evidence simply adds nothing on crossings whose
  // base survival is already higher (intra-family handovers). The engine
  // applies the improved value only where it actually improves.

  void finalize() {
    if (mode_ == ResolveMode::DataFile) return;
    if (!saw_mission_) {
      error(1, 1, "missing [mission] section");
      return;
    }

    const bool trajectory_mode = !scenario_.trajectory.empty();
    if (trajectory_mode) {
      if (!scenario_.events.empty()) {
        error(scenario_.events.front().source_line, 1,
              "trajectory scenarios cannot contain [event] sections");
      }
      if (scenario_.trajectory.size() < 2) {
        error(1, 1, "trajectory requires at least two points");
      }
      std::stable_sort(scenario_.trajectory.begin(), scenario_.trajectory.end(),
                       [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
                         return a.t_min < b.t_min;
                       });
    } else {
      if (scenario_.start_rat.empty()) {
        error(1, 1, "mission requires start_rat");
      } else if (!rat_declared(scenario_.start_rat)) {
        error(start_rat_line_, 1,
              "start_rat '" + scenario_.start_rat + "' is not a declared RAT",
              scenario_.start_rat);
      } else if (scenario_.profiles.at(scenario_.start_rat).trust_silo) {
        error(start_rat_line_, 1, "start_rat cannot be a trust silo", scenario_.start_rat);
      }
    }

    if (budget_.has_value()) {
      if (budget_keys_.size() != 4) {
        error(budget_line_, 1,
              "power budget requires all of p_max_mw, p_flight_mw, p_payload_mw, p_comms_mw");
      } else {
        scenario_.budget = budget_;
      }
    }

    // Initial state must respect the start RAT's ceiling semantics later;
    // here it only has to be a valid state (checked at parse of the key).

    bool unordered = false;
    for (std::size_t i = 1; i < scenario_.events.size(); ++i) {
      if (scenario_.events[i].t_ms < scenario_.events[i - 1].t_ms) {
        unordered = true;
        break;
      }
    }
    if (unordered) {
      warning(1, 1, "events were not time-ordered in the input; sorted stably by t_s");
      std::stable_sort(scenario_.events.begin(), scenario_.events.end(),
                       [](const ScenarioEvent& a, const ScenarioEvent& b) {
                         return a.t_ms < b.t_ms;
                       });
    }

    const auto duration_ms =
        static_cast<std::int64_t>(std::llround(scenario_.duration_min * 60.0 * 1000.0));
    for (const ScenarioEvent& event : scenario_.events) {
      if (event.t_ms > duration_ms) {
        error(event.source_line, 1, "event time exceeds mission duration");
      }
    }

    register_decoys();

    if (scenario_.name.empty()) scenario_.name = "unnamed";
  }

  const ScenarioDocument& doc_;
  ResolveMode mode_;
  MissionScenario scenario_;
  const SurvivalMatrixSet* defaults_matrices_ = nullptr;
  std::vector<ParseDiagnostic> diagnostics_;
  bool saw_mission_ = false;
  int start_rat_line_ = 1;
  int budget_line_ = 1;
  std::optional<std::vector<std::string>> rat_filter_;
  int rat_filter_line_ = 1;
  std::optional<PowerBudget> budget_;
  std::set<std::string> budget_keys_;
  std::set<std::string> decoy_ids_;
};

}  // namespace

std::string format_diagnostic(const ParseDiagnostic& d) {
  std::ostringstream os;
  os << "line " << d.line << ":" << d.column << ": "
     << (d.severity == ParseDiagnostic::Severity::Error ? "error" : "warning") << ": "
     << d.message;
  if (!d.token.empty()) os << " ['" << d.token << "']";
  return os.str();
}

std::string_view portability_mode_name(PortabilityMode m) {
  switch (m) {
    case PortabilityMode::Naive:
      return "naive";
    case PortabilityMode::Portable:
      return "portable";
    case PortabilityMode::Both:
      return "both";
  }
  return "naive";
}

std::optional<PortabilityMode> portability_mode_from(std::string_view name) {
  if (name == "naive") return PortabilityMode::Naive;
  if (name == "portable") return PortabilityMode::Portable;
  if (name == "both") return PortabilityMode::Both;
  return std::nullopt;
}

std::string_view remote_id_name(RemoteIdSignal s) {
  switch (s) {
    case RemoteIdSignal::Absent:
      return "absent";
    case RemoteIdSignal::Corroborated:
      return "corroborated";
    case RemoteIdSignal::Spoofed:
      return "spoofed";
  }
  return "absent";
}

std::optional<RemoteIdSignal> remote_id_from(std::string_view name) {
  if (name == "absent") return RemoteIdSignal::Absent;
  if (name == "corroborated") return RemoteIdSignal::Corroborated;
  if (name == "spoofed") return RemoteIdSignal::Spoofed;
  return std::nullopt;
}

bool MissionScenario::has_adversary_actions() const {
  return std::any_of(events.begin(), events.end(), [](const ScenarioEvent& e) {
    return std::holds_alternative<JamAction>(e.payload) ||
           std::holds_alternative<RogueAction>(e.payload) ||
           std::holds_alternative<ReplayAction>(e.payload) ||
           std::holds_alternative<ForceTransitionAction>(e.payload);
  });
}

bool ParseOutcome::ok() const {
  return std::none_of(diagnostics.begin(), diagnostics.end(), [](const ParseDiagnostic& d) {
    return d.severity == ParseDiagnostic::Severity::Error;
  });
}

ParseOutcome parse_scenario(std::string_view text, const DefaultData& defaults) {
  ParseOutcome outcome;
  Tokenized tokenized = tokenize(text);
  outcome.diagnostics = std::move(tokenized.diagnostics);
  outcome.document = std::move(tokenized.document);

  Resolver resolver(*outcome.document, defaults, ResolveMode::Scenario);
  auto scenario = resolver.resolve();
  for (auto& d : resolver.take_diagnostics()) outcome.diagnostics.push_back(std::move(d));
  if (outcome.ok()) outcome.scenario = std::move(scenario);
  return outcome;
}

DefaultsParseOutcome parse_default_data(std::string_view text) {
  DefaultsParseOutcome outcome;
  Tokenized tokenized = tokenize(text);
  outcome.diagnostics = std::move(tokenized.diagnostics);

  DefaultData empty;
  Resolver resolver(tokenized.document, empty, ResolveMode::DataFile);
  auto scenario = resolver.resolve();
  for (auto& d : resolver.take_diagnostics()) outcome.diagnostics.push_back(std::move(d));

  const bool has_errors = std::any_of(
      outcome.diagnostics.begin(), outcome.diagnostics.end(),
      [](const ParseDiagnostic& d) { return d.severity == ParseDiagnostic::Severity::Error; });
  if (!has_errors && scenario.has_value()) {
    DefaultData data;
    data.rat_order = std::move(scenario->rat_order);
    data.profiles = std::move(scenario->profiles);
    data.matrices = std::move(scenario->matrices);
    data.portability = std::move(scenario->portability);
    data.ladder = std::move(scenario->ladder);
    outcome.data = std::move(data);
  }
  return outcome;
}

}  // namespace ztratsim
