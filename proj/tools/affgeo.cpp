// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver for the built-in scenarios.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "affgeo/affgeo.h"

namespace {

int report_error(affgeo_status s) {
  std::cerr << "affgeo: " << affgeo_status_name(s) << " error: " << affgeo_last_error() << '\n';
  return 2;
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream f(path);
  if (!f) return false;
  std::stringstream ss;
  ss << f.rdbuf();
  text = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine-map diagnostics on Riemannian charts"};
  app.set_version_flag("--version", std::string(affgeo_version()));
  app.require_subcommand(1);

  std::string scenario, out_dir, config_path;
  std::uint64_t seed = 0;
  int steps = 0, grid = 0;
  CLI::App* run = app.add_subcommand("run", "Run one scenario or all of them");
  run->add_option("scenario", scenario, "Scenario name or 'all'")->required();
  run->add_option("--out", out_dir, "Output directory for reports and CSV grids")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Random seed (default 1)");
  run->add_option("--steps", steps, "RK4 steps per geodesic (default 64)")
      ->check(CLI::PositiveNumber);
  run->add_option("--grid", grid, "Direction grid resolution (default 720)")
      ->check(CLI::Range(8, 1 << 20));
  run->add_option("--config", config_path, "JSON run config with per-scenario parameters")
      ->check(CLI::ExistingFile);

  app.add_subcommand("list", "List the built-in scenarios");

  std::string merge_dir, merge_out;
  CLI::App* report = app.add_subcommand("report", "Summarise a directory of scenario reports");
  report->add_option("--merge", merge_dir, "Directory written by 'run'")->required();
  report->add_option("--out", merge_out, "Merged report path (default <dir>/summary.json)");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("list")) {
    for (size_t i = 0; i < affgeo_scenario_count(); ++i)
      std::cout << affgeo_scenario_name(i) << "\t" << affgeo_scenario_description(i) << '\n';
    return 0;
  }

  if (app.got_subcommand("run")) {
    std::string config_text;
    if (!config_path.empty() && !read_file(config_path, config_text)) {
      std::cerr << "affgeo: cannot read " << config_path << '\n';
      return 2;
    }
    affgeo_run_config cfg;
    affgeo_run_config_init(&cfg);
    if (seed_opt->count() > 0) {
      cfg.seed = seed;
      cfg.use_seed = 1;
    }
    cfg.steps = steps;
    cfg.grid = grid;
    cfg.config_json = config_path.empty() ? nullptr : config_text.c_str();
    int failed = 0;
    const affgeo_status s = affgeo_run(scenario.c_str(), out_dir.c_str(), &cfg, &failed);
    if (s != AFFGEO_OK) return report_error(s);
    const std::string summary = (std::filesystem::path(out_dir) / "summary.json").string();
    int all_passed = 0;
    const affgeo_status m = affgeo_merge_reports(out_dir.c_str(), summary.c_str(), &all_passed);
    if (m != AFFGEO_OK) return report_error(m);
    std::cout << (failed == 0 ? "all scenarios passed" : std::to_string(failed) + " scenario(s) failed")
              << "; summary written to " << summary << '\n';
    return failed == 0 ? 0 : 1;
  }

  if (merge_out.empty()) merge_out = (std::filesystem::path(merge_dir) / "summary.json").string();
  int all_passed = 0;
  const affgeo_status s = affgeo_merge_reports(merge_dir.c_str(), merge_out.c_str(), &all_passed);
  if (s != AFFGEO_OK) return report_error(s);
  std::cout << merge_out << ": " << (all_passed ? "passed" : "failed") << '\n';
  return all_passed ? 0 : 1;
}
