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
#include <limits>
#include <sstream>

#include "nlohmann/json.hpp"
#include "ztratsim/emit.hpp"
#include "ztratsim/scenario.hpp"
#include "ztratsim/text_util.hpp"

namespace ztratsim {

namespace {

int section_rank(const ScenarioDocument::Section& s) {
  if (s.name == "mission") return 0;
  if (s.name == "rat") return 1;
  if (s.name == "survival") return 2;
  if (s.name == "portability") return 3;
  if (s.name == "flows") return 4;
  if (s.name == "event") return 5;
  if (s.name == "trajectory") return 6;
  if (s.name == "published") return 7;
  return 8;
}

int survival_component_rank(const std::string& arg) {
  const auto c = component_from(arg);
  return c.has_value() ? static_cast<int>(*c) : 5;
}

const std::vector<std::string>& key_order(const std::string& section) {
  static const std::vector<std::string> mission = {
      "name",           "duration_min",        "weights",
      "t_min",          "verify_interval_s",   "seed",
      "device_id",      "rats",                "start_rat",           "initial_state",
      "initial_auth_mj", "initial_auth_portable_mj", "portability",
      "remote_id",      "p_max_mw",            "p_flight_mw",
      "p_payload_mw",   "p_comms_mw"};
  static const std::vector<std::string> rat = {
      "family",    "ceiling", "reauth",      "cost_mj", "verify_mj",  "decay",
      "shape",     "mutual_auth", "trust_silo", "connected", "silo_ctx", "decay_event"};
  static const std::vector<std::string> event = {
      "t_s",   "type",        "to",    "kind",  "rat",        "duration_s",
      "fake",  "mimics",      "index", "name",  "flow",       "sensitivity",
      "component", "cost_mj", "cost_naive_mj", "cost_portable_mj"};
  static const std::vector<std::string> portability = {
      "enabled",        "components",     "improved_id",   "improved_dev",
      "improved_ctx",   "improved_net",   "improved_pol",  "verify_mj",
      "freshness_window_s", "ladder_from", "ladder_to",    "ladder_kind",
      "ladder_cost_mj", "ladder_verify_mj", "ladder_latency_ms",
      "ladder_verify_latency_ms"};
  static const std::vector<std::string> empty;
  if (section == "mission") return mission;
  if (section == "rat") return rat;
  if (section == "event") return event;
  if (section == "portability") return portability;
  return empty;
}

// Only keys whose values are purely numeric get renumbered: string-valued
// keys (names, rat ids) must survive verbatim, [published] entries keep
// their printed precision (it defines the check tolerance), and seeds can
// exceed the double mantissa.
bool numeric_value_key(const std::string& section, const std::string& key) {
  if (section == "survival" || section == "trajectory") return true;
  if (section == "mission") {
    static const std::vector<std::string> keys = {
        "duration_min", "weights", "t_min", "verify_interval_s", "initial_state",
        "initial_auth_mj", "initial_auth_portable_mj", "p_max_mw", "p_flight_mw",
        "p_payload_mw", "p_comms_mw"};
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  }
  if (section == "rat") {
    static const std::vector<std::string> keys = {"ceiling", "reauth", "cost_mj", "verify_mj",
                                                  "decay", "shape", "silo_ctx"};
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  }
  if (section == "portability") {
    if (key.rfind("improved_", 0) == 0) return true;
    static const std::vector<std::string> keys = {"verify_mj", "freshness_window_s",
                                                  "ladder_cost_mj", "ladder_verify_mj",
                                                  "ladder_latency_ms",
                                                  "ladder_verify_latency_ms"};
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  }
  if (section == "event") {
    static const std::vector<std::string> keys = {"t_s",          "duration_s",
                                                  "cost_mj",      "cost_naive_mj",
                                                  "cost_portable_mj", "index"};
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  }
  return false;
}

std::string normalize_value(const std::string& section, const std::string& key,
                            const std::string& value) {
  std::string out;
  const bool numeric = numeric_value_key(section, key);
  for (const auto token : split_ws(value)) {
    if (!out.empty()) out += " ";
    auto number = parse_double(token);
    if (numeric && number.has_value()) {
      out += format_double_shortest(*number);
    } else {
      out += std::string(token);
    }
  }
  return out;
}

double event_time_of(const ScenarioDocument::Section& s) {
  for (const auto& kv : s.entries) {
    if (kv.key == "t_s") {
      if (auto t = parse_double(kv.value)) return *t;
    }
  }
  return std::numeric_limits<double>::infinity();
}

std::string sanitize_csv_field(std::string field) {
  std::replace(field.begin(), field.end(), ',', ';');
  return field;
}

nlohmann::json state_to_json(const TrustState& s) {
  return nlohmann::json{{"id", s[TrustComponent::Identity]},
                        {"dev", s[TrustComponent::Device]},
                        {"ctx", s[TrustComponent::Context]},
                        {"net", s[TrustComponent::Network]},
                        {"pol", s[TrustComponent::Policy]}};
}

}  // namespace

std::string emit_scenario(const ScenarioDocument& document) {
  std::vector<const ScenarioDocument::Section*> sections;
  sections.reserve(document.sections.size());
  for (const auto& s : document.sections) sections.push_back(&s);

  std::stable_sort(sections.begin(), sections.end(),
                   [](const ScenarioDocument::Section* a, const ScenarioDocument::Section* b) {
                     const int ra = section_rank(*a);
                     const int rb = section_rank(*b);
                     if (ra != rb) return ra < rb;
                     if (a->name == "rat") return a->arg < b->arg;
                     if (a->name == "survival") {
                       return survival_component_rank(a->arg) < survival_component_rank(b->arg);
                     }
                     if (a->name == "event") return event_time_of(*a) < event_time_of(*b);
                     return false;
                   });

  std::ostringstream out;
  bool first = true;
  for (const ScenarioDocument::Section* section : sections) {
    if (!first) out << "\n";
    first = false;
    out << "[" << section->name;
    if (!section->arg.empty()) out << " " << section->arg;
    out << "]\n";

    std::vector<const ScenarioDocument::KeyValue*> entries;
    entries.reserve(section->entries.size());
    for (const auto& kv : section->entries) entries.push_back(&kv);

    const auto& order = key_order(section->name);
    auto rank_of = [&](const std::string& key) {
      const auto it = std::find(order.begin(), order.end(), key);
      return it == order.end() ? order.size() : static_cast<std::size_t>(it - order.begin());
    };
    if (section->name == "survival" || section->name == "published") {
      std::stable_sort(entries.begin(), entries.end(),
                       [](const ScenarioDocument::KeyValue* a,
                          const ScenarioDocument::KeyValue* b) { return a->key < b->key; });
    } else if (!order.empty()) {
      std::stable_sort(entries.begin(), entries.end(),
                       [&](const ScenarioDocument::KeyValue* a,
                           const ScenarioDocument::KeyValue* b) {
                         return rank_of(a->key) < rank_of(b->key);
                       });
    }
    for (const auto* kv : entries) {
      out << kv->key << " = " << normalize_value(section->name, kv->key, kv->value) << "\n";
    }
  }
  return out.str();
}

std::string emit_timeline(const Timeline& timeline) {
  std::ostringstream out;
  out << "t_s,event,active_rats,s_id,s_dev,s_ctx,s_net,s_pol,composite,energy_cum_mJ,"
         "below_threshold\n";
  for (const TimelineSample& sample : timeline) {
    out << format_double_fixed6(static_cast<double>(sample.t_ms) / 1000.0) << ",";
    out << sanitize_csv_field(sample.event) << ",";
    std::string rats;
    for (const auto& rat : sample.active_rats) {
      if (!rats.empty()) rats += ";";
      rats += rat;
    }
    out << sanitize_csv_field(rats) << ",";
    for (TrustComponent c : kComponents) {
      out << format_double_fixed6(sample.primary[c]) << ",";
    }
    out << format_double_fixed6(sample.composite) << ",";
    out << format_double_fixed6(sample.energy_cum_mj) << ",";
    out << (sample.below_threshold ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string emit_report_text(const MissionReport& report) {
  std::ostringstream out;
  char buf[128];

  out << "scenario: " << report.scenario_name << " (seed " << report.seed << ")\n";
  std::snprintf(buf, sizeof(buf), "duration: %.1f min, verification every %.0f s (%d ticks, %.1f mJ)\n",
                report.duration_min, report.verify_interval_s, report.verification_count,
                report.verify_energy_mj);
  out << buf;

  if (!report.crossings.empty() || report.initial_auth_mj > 0.0) {
    out << "\nauthentication ledger:\n";
    std::snprintf(buf, sizeof(buf), "  %-9s %-28s %-14s %10s %12s %8s\n", "t_s", "event", "kind",
                  "naive mJ", "portable mJ", "saving");
    out << buf;
    std::snprintf(buf, sizeof(buf), "  %-9s %-28s %-14s %10.1f %12.1f %8s\n", "0.0",
                  "initial auth", "-", report.initial_auth_mj, report.initial_auth_mj, "-");
    out << buf;
    for (const CrossingRecord& record : report.crossings) {
      const double portable = record.portable_cost_mj.value_or(record.cost_mj);
      std::string saving = "-";
      if (record.portable_cost_mj.has_value() && record.cost_mj > 0.0) {
        // Round half away from zero, matching how the published ledger rounds.
        const long pct = std::lround(100.0 * (record.cost_mj - portable) / record.cost_mj);
        saving = std::to_string(pct) + "%";
      }
      const std::string transition = record.from_rat + " -> " + record.to_rat;
      std::snprintf(buf, sizeof(buf), "  %-9.1f %-28s %-14s %10.1f %12.1f %8s\n", record.time_s,
                    transition.c_str(), std::string(kind_name(record.kind)).c_str(),
                    record.cost_mj, portable, saving.c_str());
      out << buf;
    }
    if (report.total_portable_mj.has_value()) {
      std::snprintf(buf, sizeof(buf), "  %-9s %-28s %-14s %10.1f %12.1f %7.1f%%\n", "", "total",
                    "", report.total_naive_mj, *report.total_portable_mj,
                    report.saving_pct.value_or(0.0));
    } else {
      std::snprintf(buf, sizeof(buf), "  %-9s %-28s %-14s %10.1f\n", "", "total", "",
                    report.total_naive_mj);
    }
    out << buf;
  }

  std::snprintf(buf, sizeof(buf), "\nsub-threshold exposure: %.1f min (%.1f%% of mission)\n",
                report.sub_threshold_min, report.sub_threshold_fraction * 100.0);
  out << buf;

  switch (report.budget.verdict) {
    case BudgetVerdict::NotConfigured:
      out << "power budget: not configured\n";
      break;
    case BudgetVerdict::Feasible:
      std::snprintf(buf, sizeof(buf),
                    "power budget: feasible (P_auth %.1f mW, budget %.1f mJ, spent %.1f mJ)\n",
                    report.budget.p_auth_mw, report.budget.budget_mj, report.budget.total_mj);
      out << buf;
      break;
    case BudgetVerdict::Infeasible:
      std::snprintf(buf, sizeof(buf),
                    "power budget: INFEASIBLE, deficit %.1f mJ (P_auth %.1f mW, budget %.1f mJ, "
                    "spent %.1f mJ)%s\n",
                    report.budget.deficit_mj, report.budget.p_auth_mw, report.budget.budget_mj,
                    report.budget.total_mj,
                    report.budget.negative_budget ? " [P_auth is negative]" : "");
      out << buf;
      break;
  }

  if (!report.flows.empty()) {
    out << "\nflows:\n";
    for (const FlowExposure& flow : report.flows) {
      std::snprintf(buf, sizeof(buf), "  %-16s on %-12s %-7s below threshold %.1f min%s\n",
                    flow.flow_id.c_str(), flow.carried_on.c_str(),
                    std::string(sensitivity_name(flow.sensitivity)).c_str(), flow.minutes_below,
                    flow.flagged ? "  [flagged]" : "");
      out << buf;
    }
  }

  if (!report.paper_check.empty()) {
    out << "\npublished-value check:\n";
    for (const PaperCheckEntry& entry : report.paper_check) {
      std::snprintf(buf, sizeof(buf), "  %-22s published %-10g computed %-12g tol %-8g %s\n",
                    entry.key.c_str(), entry.published, entry.computed, entry.tolerance,
                    entry.mismatch ? "MISMATCH" : "consistent");
      out << buf;
    }
  }

  if (!report.notes.empty()) {
    out << "\nnotes:\n";
    for (const auto& note : report.notes) out << "  " << note << "\n";
  }
  return out.str();
}

std::string emit_report_json(const MissionReport& report) {
  nlohmann::json j;
  j["scenario"] = report.scenario_name;
  j["seed"] = report.seed;
  j["duration_min"] = report.duration_min;
  j["initial_auth_mj"] = report.initial_auth_mj;
  j["total_naive_mj"] = report.total_naive_mj;
  if (report.total_portable_mj.has_value()) {
    j["total_portable_mj"] = *report.total_portable_mj;
    j["saving_pct"] = report.saving_pct.value_or(0.0);
  }
  j["verification"] = {{"count", report.verification_count},
                       {"interval_s", report.verify_interval_s},
                       {"energy_mj", report.verify_energy_mj}};
  j["sub_threshold"] = {{"minutes", report.sub_threshold_min},
                        {"fraction", report.sub_threshold_fraction}};

  nlohmann::json crossings = nlohmann::json::array();
  for (const CrossingRecord& record : report.crossings) {
    nlohmann::json c;
    c["t_s"] = record.time_s;
    c["from"] = record.from_rat;
    c["to"] = record.to_rat;
    c["kind"] = std::string(kind_name(record.kind));
    c["pre"] = state_to_json(record.pre_state);
    c["post"] = state_to_json(record.post_state);
    c["recovered"] = state_to_json(record.recovered_state);
    c["cost_naive_mj"] = record.cost_mj;
    if (record.portable_cost_mj.has_value()) c["cost_portable_mj"] = *record.portable_cost_mj;
    nlohmann::json accepted = nlohmann::json::array();
    for (TrustComponent comp : record.accepted_artefacts) {
      accepted.push_back(std::string(short_name(comp)));
    }
    c["accepted_artefacts"] = accepted;
    c["trust_gap_s"] = record.trust_gap_s;
    c["gap_exploited"] = record.gap_exploited;
    crossings.push_back(std::move(c));
  }
  j["crossings"] = std::move(crossings);

  nlohmann::json budget;
  switch (report.budget.verdict) {
    case BudgetVerdict::NotConfigured:
      budget["verdict"] = "not-configured";
      break;
    case BudgetVerdict::Feasible:
      budget["verdict"] = "feasible";
      break;
    case BudgetVerdict::Infeasible:
      budget["verdict"] = "infeasible";
      budget["deficit_mj"] = report.budget.deficit_mj;
      break;
  }
  if (report.budget.verdict != BudgetVerdict::NotConfigured) {
    budget["p_auth_mw"] = report.budget.p_auth_mw;
    budget["budget_mj"] = report.budget.budget_mj;
    budget["total_mj"] = report.budget.total_mj;
    budget["negative_budget"] = report.budget.negative_budget;
  }
  j["budget"] = std::move(budget);

  nlohmann::json flows = nlohmann::json::array();
  for (const FlowExposure& flow : report.flows) {
    flows.push_back({{"flow", flow.flow_id},
                     {"carried_on", flow.carried_on},
                     {"sensitivity", std::string(sensitivity_name(flow.sensitivity))},
                     {"minutes_below", flow.minutes_below},
                     {"flagged", flow.flagged}});
  }
  j["flows"] = std::move(flows);

  nlohmann::json checks = nlohmann::json::array();
  for (const PaperCheckEntry& entry : report.paper_check) {
    checks.push_back({{"key", entry.key},
                      {"published", entry.published},
                      {"computed", entry.computed},
                      {"tolerance", entry.tolerance},
                      {"mismatch", entry.mismatch}});
  }
  j["paper_check"] = std::move(checks);
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

std::string emit_matrices(const SurvivalMatrixSet& matrices,
                          std::optional<TrustComponent> only) {
  std::ostringstream out;
  bool first = true;
  for (TrustComponent c : kComponents) {
    if (only.has_value() && *only != c) continue;
    if (!first) out << "\n";
    first = false;
    out << "[survival " << short_name(c) << "]\n";
    for (const std::string& from : matrices.rats()) {
      for (const std::string& to : matrices.rats()) {
        out << from << "." << to << " = " << format_double_shortest(matrices.sigma(c, from, to))
            << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace ztratsim
