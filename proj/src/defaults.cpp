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

#include "ztratsim/defaults.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ztratsim/error.hpp"

namespace ztratsim {

namespace embedded {
// Defined in the generated embedded_data.cpp.
extern const char* const kDefaults;
extern const char* const kWorkedExample;
extern const char* const kCaseStudy;
extern const char* const kFigure2;
}  // namespace embedded

namespace {

std::optional<std::string> read_override_file(std::string_view filename) {
  const char* dir = std::getenv("ZT_RATSIM_DATA");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  const std::filesystem::path path = std::filesystem::path(dir) / filename;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool same_family(const RatProfile& a, const RatProfile& b) { return a.family == b.family; }

double policy_tier(RatFamily target) {
  switch (target) {
    case RatFamily::Cellular:
    case RatFamily::Wifi:
    case RatFamily::Satellite:
      return 0.4;
    case RatFamily::LpwanStar:
    case RatFamily::ProprietaryC2:
      return 0.2;
    case RatFamily::LoraMesh:
    case RatFamily::TelemetrySerial:
    case RatFamily::Ble:
      return 0.1;
  }
  return 0.1;
}

}  // namespace

std::string_view embedded_defaults_text() { return embedded::kDefaults; }

std::string_view embedded_scenario_text(std::string_view name) {
  if (name == "worked-example") return embedded::kWorkedExample;
  if (name == "case-study") return embedded::kCaseStudy;
  if (name == "figure-2") return embedded::kFigure2;
  return {};
}

std::vector<std::string> builtin_scenario_names() {
  return {"worked-example", "case-study", "figure-2"};
}

std::array<double, kComponentCount> default_decay_rates(RatFamily family) {
  switch (family) {
    case RatFamily::Cellular:
    case RatFamily::Wifi:
    case RatFamily::Satellite:
    case RatFamily::ProprietaryC2:
      // Monitored infrastructure refreshes signals continuously.
      return {0.002, 0.002, 0.005, 0.005, 0.005};
    case RatFamily::LpwanStar:
    case RatFamily::LoraMesh:
    case RatFamily::TelemetrySerial:
    case RatFamily::Ble:
      return {0.01, 0.004, 0.02, 0.01, 0.02};
  }
  return {0.01, 0.004, 0.02, 0.01, 0.02};
}

void fill_survival_defaults(SurvivalMatrixSet& matrices,
                            const std::map<std::string, RatProfile>& profiles) {
  for (const std::string& from : matrices.rats()) {
    for (const std::string& to : matrices.rats()) {
      auto from_it = profiles.find(from);
      auto to_it = profiles.find(to);
      if (from_it == profiles.end() || to_it == profiles.end()) continue;
      const bool diagonal = from == to;
      const bool family = same_family(from_it->second, to_it->second);

      auto fill = [&](TrustComponent c, double value) {
        if (!matrices.is_set(c, from, to)) matrices.set(c, from, to, value);
      };
      fill(TrustComponent::Identity, diagonal ? 0.85 : (family ? 0.8 : 0.0));
      fill(TrustComponent::Device, diagonal ? 0.9 : (family ? 0.8 : 0.5));
      fill(TrustComponent::Context, diagonal || family ? 0.9 : 0.5);
      fill(TrustComponent::Network, diagonal ? 0.9 : (family ? 0.8 : 0.0));
      fill(TrustComponent::Policy,
           diagonal || family ? 0.9 : policy_tier(to_it->second.family));
    }
  }
}

DefaultData load_default_data() {
  std::string_view text = embedded_defaults_text();
  std::string override_text;
  if (auto file = read_override_file("defaults.zt")) {
    override_text = std::move(*file);
    text = override_text;
  }
  DefaultsParseOutcome outcome = parse_default_data(text);
  if (!outcome.data.has_value()) {
    std::ostringstream os;
    os << "defaults data failed to parse:";
    for (const auto& d : outcome.diagnostics) os << "\n  " << format_diagnostic(d);
    throw ConfigError(os.str());
  }
  return std::move(*outcome.data);
}

std::string builtin_scenario_source(std::string_view name) {
  if (auto file = read_override_file(std::string(name) + ".zt")) return std::move(*file);
  std::string_view text = embedded_scenario_text(name);
  if (text.empty()) {
    throw LookupError("unknown built-in scenario '" + std::string(name) +
                      "' (expected worked-example, case-study, or figure-2)");
  }
  return std::string(text);
}

}  // namespace ztratsim
