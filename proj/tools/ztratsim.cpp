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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ztratsim/defaults.hpp"
#include "ztratsim/emit.hpp"
#include "ztratsim/error.hpp"
#include "ztratsim/mission.hpp"
#include "ztratsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitInfeasible = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

void print_diagnostics(const std::string& source, const std::vector<ztratsim::ParseDiagnostic>& diags) {
  for (const auto& d : diags) {
    std::cerr << source << ": " << ztratsim::format_diagnostic(d) << "\n";
  }
}

struct SimOutput {
  std::string source;
  bool parse_failed = false;
  std::vector<ztratsim::ParseDiagnostic> diagnostics;
  ztratsim::RunResult result;
};

SimOutput run_one(const std::string& source, const std::string& text,
                  const ztratsim::DefaultData& defaults, const ztratsim::RunOptions& options) {
  SimOutput out;
  out.source = source;
  auto parsed = ztratsim::parse_scenario(text, defaults);
  out.diagnostics = parsed.diagnostics;
  if (!parsed.scenario.has_value()) {
    out.parse_failed = true;
    return out;
  }
  out.result = ztratsim::run(*parsed.scenario, options);
  return out;
}

int finish(const SimOutput& out, const std::string& timeline_path, const std::string& report_path,
           bool strict_budget) {
  print_diagnostics(out.source, out.diagnostics);
  if (out.parse_failed) return kExitDiagnostics;

  if (!timeline_path.empty()) {
    if (!write_file(timeline_path, ztratsim::emit_timeline(out.result.timeline))) {
      std::cerr << "cannot write timeline to " << timeline_path << "\n";
      return kExitDiagnostics;
    }
  }
  if (!report_path.empty()) {
    if (!write_file(report_path, ztratsim::emit_report_json(out.result.report))) {
      std::cerr << "cannot write report to " << report_path << "\n";
      return kExitDiagnostics;
    }
  }
  std::cout << ztratsim::emit_report_text(out.result.report);

  if (strict_budget &&
      out.result.report.budget.verdict == ztratsim::BudgetVerdict::Infeasible) {
    return kExitInfeasible;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ztratsim: trust-state dynamics for multi-RAT devices crossing trust boundaries"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string builtin_name;
  std::string timeline_path;
  std::string report_path;
  std::string component_filter;
  std::optional<std::uint64_t> seed_override;
  bool paper_check = false;
  bool strict_budget = false;

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_override, "override the scenario seed");
    cmd->add_option("--timeline", timeline_path, "write the timeline CSV to this path");
    cmd->add_option("--report", report_path, "write the JSON report to this path");
    cmd->add_flag("--paper-check", paper_check,
                  "cross-check computed values against the published figures");
    cmd->add_flag("--strict-budget", strict_budget,
                  "exit with status 2 when the power budget is infeasible");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run one or more scenario files");
  simulate->add_option("files", files, "scenario files")->required()->expected(-1);
  add_run_options(simulate);

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "run a built-in scenario (worked-example, case-study, figure-2)");
  reproduce->add_option("name", builtin_name, "built-in scenario name")->required();
  add_run_options(reproduce);

  CLI::App* matrices = app.add_subcommand("matrices", "dump the active survival matrices");
  matrices->add_option("--component", component_filter, "restrict to one component (id dev ctx net pol)");

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario without running it");
  validate->add_option("files", files, "scenario files")->required()->expected(-1);

  CLI11_PARSE(app, argc, argv);

  try {
    const ztratsim::DefaultData defaults = ztratsim::load_default_data();
    ztratsim::RunOptions options;
    options.paper_check = paper_check;
    options.seed_override = seed_override;

    if (matrices->parsed()) {
      std::optional<ztratsim::TrustComponent> only;
      if (!component_filter.empty()) {
        only = ztratsim::component_from(component_filter);
        if (!only.has_value()) {
          std::cerr << "unknown component '" << component_filter << "'\n";
          return kExitDiagnostics;
        }
      }
      std::cout << ztratsim::emit_matrices(defaults.matrices, only);
      return kExitOk;
    }

    if (validate->parsed()) {
      int status = kExitOk;
      for (const auto& path : files) {
        auto text = read_file(path);
        if (!text.has_value()) {
          std::cerr << path << ": cannot read file\n";
          status = kExitDiagnostics;
          continue;
        }
        auto outcome = ztratsim::parse_scenario(*text, defaults);
        print_diagnostics(path, outcome.diagnostics);
        if (!outcome.ok()) {
          status = kExitDiagnostics;
        } else {
          std::cout << path << ": ok (" << outcome.scenario->name << ")\n";
        }
      }
      return status;
    }

    if (reproduce->parsed()) {
      const std::string text = ztratsim::builtin_scenario_source(builtin_name);
      return finish(run_one(builtin_name, text, defaults, options), timeline_path, report_path,
                    strict_budget);
    }

    // simulate
    if (files.size() > 1 && (!timeline_path.empty() || !report_path.empty())) {
      std::cerr << "--timeline/--report require a single scenario file\n";
      return kExitDiagnostics;
    }
    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto& path : files) {
      auto text = read_file(path);
      if (!text.has_value()) {
        std::cerr << path << ": cannot read file\n";
        return kExitDiagnostics;
      }
      sources.emplace_back(path, std::move(*text));
    }
    if (sources.size() == 1) {
      return finish(run_one(sources[0].first, sources[0].second, defaults, options),
                    timeline_path, report_path, strict_budget);
    }
    // Batch mode: scenarios are independent, run them concurrently and
    // print the reports in input order.
    std::vector<std::future<SimOutput>> futures;
    futures.reserve(sources.size());
    for (const auto& [path, text] : sources) {
      futures.push_back(std::async(std::launch::async, run_one, path, text, std::cref(defaults),
                                   std::cref(options)));
    }
    int status = kExitOk;
    for (auto& future : futures) {
      const SimOutput out = future.get();
      print_diagnostics(out.source, out.diagnostics);
      if (out.parse_failed) {
        status = kExitDiagnostics;
        continue;
      }
      std::cout << ztratsim::emit_report_text(out.result.report) << "\n";
      if (strict_budget &&
          out.result.report.budget.verdict == ztratsim::BudgetVerdict::Infeasible &&
          status == kExitOk) {
        status = kExitInfeasible;
      }
    }
    return status;
  } catch (const ztratsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiagnostics;
  }
}
