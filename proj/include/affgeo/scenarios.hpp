// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace affgeo {

struct RunConfig {
  std::uint64_t seed = 1;
  // Integrator steps per geodesic.
  int steps = 64;
  // Direction-grid resolution for norm fields.
  int grid = 720;
  // Per-scenario parameter overrides: {"<scenario>": {"<param>": value}}.
  nlohmann::json overrides = nlohmann::json::object();
};

// Reads {"seed", "steps", "grid", "scenarios": {...}} from a JSON document.
RunConfig run_config_from_json(const std::string& json_text);

struct Assertion {
  std::string id;
  // Acceptance criterion this assertion contributes to; 0 for none.
  int criterion = 0;
  bool passed = false;
  std::string relation;  // "<=", ">=", "in", "is"
  nlohmann::json value;
  nlohmann::json threshold;
  // Wall time spent since the previous assertion; kept out of the report.
  double seconds = 0.0;
};

struct ScenarioResult {
  std::string name;
  nlohmann::json report;
  std::vector<Assertion> assertions;
  std::vector<std::string> files;
  bool passed = false;
  double seconds = 0.0;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

const std::vector<ScenarioInfo>& scenario_catalog();
bool has_scenario(const std::string& name);

// Runs one scenario. With a non-empty out_dir, writes out_dir/<name>/report.json
// plus CSV side files. Library errors inside a suite become failed assertions.
ScenarioResult run_scenario(const std::string& name, const RunConfig& config,
                            const std::string& out_dir);

// `name` may be "all".
std::vector<ScenarioResult> run_scenarios(const std::string& name,
                                          const RunConfig& config,
                                          const std::string& out_dir);

// Collects <dir>/*/report.json into one summary document.
nlohmann::json merge_reports(const std::string& dir);

// Report without its timestamp, for reproducibility comparisons.
nlohmann::json strip_timestamp(nlohmann::json report);

}  // namespace affgeo
