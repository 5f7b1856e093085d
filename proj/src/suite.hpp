// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

// Bookkeeping shared by the built-in scenario suites.

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "affgeo/affine.hpp"
#include "affgeo/holonomy.hpp"
#include "affgeo/norms.hpp"
#include "affgeo/scenarios.hpp"

namespace affgeo::detail {

class Suite {
 public:
  Suite(std::string name, const RunConfig& config, std::string out_dir);

  const RunConfig& config() const { return config_; }
  std::uint64_t seed(int offset = 0) const { return config_.seed + static_cast<std::uint64_t>(offset); }
  int steps() const { return config_.steps; }
  int grid() const { return config_.grid; }

  // Scenario parameter with per-scenario override; recorded in the report.
  double param(const std::string& key, double fallback);
  int param_int(const std::string& key, int fallback);

  nlohmann::json& results() { return report_["results"]; }
  void describe_manifold(const ChartManifold& m);

  void check_le(const std::string& id, int criterion, double value, double bound);
  void check_ge(const std::string& id, int criterion, double value, double bound);
  void check_in(const std::string& id, int criterion, const std::vector<double>& values,
                double lo, double hi);
  void check_is(const std::string& id, int criterion, const nlohmann::json& value,
                const nlohmann::json& expected);
  // Records an exception raised by a suite step as a failed assertion.
  void fail(const std::string& id, const std::string& message);

  // Writes the grid of q as <out>/<name>/<file> when an output directory is set.
  void export_csv(const std::string& file, const NormField& q);

  ScenarioResult finish();

 private:
  void record(Assertion a);

  std::string name_;
  RunConfig config_;
  std::string out_dir_;
  nlohmann::json report_;
  nlohmann::json scenario_overrides_;
  std::vector<Assertion> assertions_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_, lap_;
};

nlohmann::json to_json(const AffinityReport& r);
nlohmann::json to_json(const SplittingReport& r);
nlohmann::json to_json(const TransitivityResult& r);
nlohmann::json to_json(const HolonomySample& s);
nlohmann::json to_json(const MinkowskiReport& r);
nlohmann::json to_json(const DecompositionReport& r);
nlohmann::json to_json(const KernelReport& r);
nlohmann::json to_json(const std::vector<MainLemmaPoint>& points);
nlohmann::json to_json(const RegularityEstimate& r);
nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const Mat& m);

// Number as JSON, with non-finite values written as strings.
nlohmann::json number(double x);

std::string utc_timestamp();

}  // namespace affgeo::detail
