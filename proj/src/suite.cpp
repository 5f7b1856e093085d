// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace affgeo::detail {

namespace fs = std::filesystem;
using nlohmann::json;

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

Suite::Suite(std::string name, const RunConfig& config, std::string out_dir)
    : name_(std::move(name)),
      config_(config),
      out_dir_(std::move(out_dir)),
      start_(std::chrono::steady_clock::now()),
      lap_(start_) {
  if (config_.overrides.is_object() && config_.overrides.contains(name_))
    scenario_overrides_ = config_.overrides.at(name_);
  report_["scenario"] = name_;
  for (const ScenarioInfo& info : scenario_catalog())
    if (info.name == name_) report_["description"] = info.description;
  report_["timestamp"] = utc_timestamp();
  report_["config"] = {{"seed", config_.seed}, {"steps", config_.steps}, {"grid", config_.grid}};
  report_["parameters"] = json::object();
  report_["results"] = json::object();
}

double Suite::param(const std::string& key, double fallback) {
  double v = fallback;
  if (scenario_overrides_.is_object() && scenario_overrides_.contains(key))
    v = scenario_overrides_.at(key).get<double>();
  report_["parameters"][key] = v;
  return v;
}

int Suite::param_int(const std::string& key, int fallback) {
  int v = fallback;
  if (scenario_overrides_.is_object() && scenario_overrides_.contains(key))
    v = scenario_overrides_.at(key).get<int>();
  report_["parameters"][key] = v;
  return v;
}

void Suite::describe_manifold(const ChartManifold& m) {
  report_["manifold"] = {
      {"name", m.name()},
      {"dim", m.dim()},
      {"christoffel_mode",
       m.christoffel_mode() == ChristoffelMode::kAnalytic ? "analytic" : "finite_difference"},
      {"convexity_radius", m.convexity_radius()},
      {"domain", {{"lo", to_json(m.domain().lo)}, {"hi", to_json(m.domain().hi)}}}};
}

void Suite::record(Assertion a) {
  const auto now = std::chrono::steady_clock::now();
  a.seconds = std::chrono::duration<double>(now - lap_).count();
  lap_ = now;
  assertions_.push_back(std::move(a));
}

void Suite::check_le(const std::string& id, int criterion, double value, double bound) {
  record({id, criterion, value <= bound, "<=", number(value), bound, 0.0});
}

void Suite::check_ge(const std::string& id, int criterion, double value, double bound) {
  record({id, criterion, value >= bound, ">=", number(value), bound, 0.0});
}

void Suite::check_in(const std::string& id, int criterion,
                     const std::vector<double>& values, double lo, double hi) {
  bool ok = !values.empty();
  json list = json::array();
  for (double v : values) {
    ok = ok && v >= lo && v <= hi;
    list.push_back(number(v));
  }
  record({id, criterion, ok, "in", list, json::array({lo, hi}), 0.0});
}

void Suite::check_is(const std::string& id, int criterion, const json& value,
                     const json& expected) {
  record({id, criterion, value == expected, "is", value, expected, 0.0});
}

void Suite::fail(const std::string& id, const std::string& message) {
  record({id, 0, false, "error", message, nullptr, 0.0});
}

void Suite::export_csv(const std::string& file, const NormField& q) {
  if (out_dir_.empty()) return;
  const fs::path dir = fs::path(out_dir_) / name_;
  fs::create_directories(dir);
  export_grid_csv(q, (dir / file).string());
  files_.push_back(file);
}

ScenarioResult Suite::finish() {
  ScenarioResult out;
  out.name = name_;
  out.passed = true;
  json list = json::array();
  for (const Assertion& a : assertions_) {
    out.passed = out.passed && a.passed;
    list.push_back({{"id", a.id},
                    {"criterion", a.criterion},
                    {"passed", a.passed},
                    {"relation", a.relation},
                    {"value", a.value},
                    {"threshold", a.threshold}});
  }
  report_["assertions"] = list;
  report_["files"] = files_;
  report_["passed"] = out.passed;
  out.assertions = assertions_;
  out.files = files_;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();

  if (!out_dir_.empty()) {
    const fs::path dir = fs::path(out_dir_) / name_;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / "report.json");
    if (!f) throw IoError("cannot write " + (dir / "report.json").string());
    f << report_.dump(2) << '\n';
    if (!f) throw IoError("write failed for " + (dir / "report.json").string());
  }
  out.report = std::move(report_);
  return out;
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

json to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vec(m.row(i).transpose())));
  return out;
}

json to_json(const AffinityReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"linearity_residual", number(r.linearity_residual)},
          {"seminorm_residual", number(r.seminorm_residual)},
          {"parallel_residual", number(r.parallel_residual)},
          {"kernel_dims", r.kernel_dims},
          {"samples",
           {{"seed", r.seed},
            {"segments", r.n_segments},
            {"skipped", r.skipped},
            {"segment_length", r.segment_length}}}};
}

json to_json(const SplittingReport& r) {
  return {{"block_dims", r.block_dims},
          {"fixed_dim", r.fixed_dim},
          {"invariance_residual", number(r.invariance_residual)},
          {"commutant_dim", r.commutant_dim},
          {"warning", r.warning}};
}

json to_json(const TransitivityResult& r) {
  return {{"verdict", r.verdict == Transitivity::kTransitive ? "transitive" : "non_transitive"},
          {"coverage_score", number(r.coverage_score)}};
}

json to_json(const HolonomySample& s) {
  double det = 0.0;
  for (const Mat& a : s.elements) det = std::max(det, std::abs(a.determinant() - 1.0));
  return {{"base", to_json(s.base)},
          {"elements", s.elements.size()},
          {"generation_depth", s.generation_depth},
          {"orthogonality_residual", number(s.orthogonality_residual())},
          {"determinant_residual", number(det)}};
}

json to_json(const MinkowskiReport& r) {
  return {{"hessian_min_eigen", number(r.hessian_min_eigen)},
          {"smooth_residual", number(r.smooth_residual)},
          {"minkowski", r.minkowski}};
}

json to_json(const DecompositionReport& r) {
  json checks = json::array();
  for (const FactorCheck& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed}});
  return {{"passed", r.passed}, {"checks", checks}, {"failures", r.failures}};
}

json to_json(const KernelReport& r) {
  return {{"dim", r.dim},
          {"threshold", number(r.threshold)},
          {"max_value", number(r.max_value)},
          {"basis_frame", to_json(r.basis_frame)}};
}

json to_json(const std::vector<MainLemmaPoint>& points) {
  json out = json::array();
  for (const MainLemmaPoint& p : points) {
    json row = {{"r", p.r}, {"dt", p.dt}, {"ratio", number(p.ratio)}, {"converged", p.converged}};
    if (!p.error.empty()) row["error"] = p.error;
    out.push_back(row);
  }
  return out;
}

json to_json(const RegularityEstimate& r) {
  json q = json::array();
  for (double x : r.quotients) q.push_back(number(x));
  return {{"t", r.t}, {"quotients", q}, {"limit", number(r.limit)}, {"regular", r.regular}};
}

}  // namespace affgeo::detail

namespace affgeo {

using nlohmann::json;

RunConfig run_config_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("run config: ") + e.what());
  }
  if (!doc.is_object()) throw ArgumentError("run config must be a JSON object");
  RunConfig cfg;
  try {
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("steps")) cfg.steps = doc.at("steps").get<int>();
    if (doc.contains("grid")) cfg.grid = doc.at("grid").get<int>();
    if (doc.contains("scenarios")) {
      cfg.overrides = doc.at("scenarios");
      if (!cfg.overrides.is_object())
        throw ArgumentError("run config: \"scenarios\" must be an object");
      for (const auto& [name, params] : cfg.overrides.items()) {
        if (!has_scenario(name)) throw ArgumentError("run config: unknown scenario " + name);
        if (!params.is_object())
          throw ArgumentError("run config: parameters of " + name + " must be an object");
      }
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("run config: ") + e.what());
  }
  return cfg;
}

json strip_timestamp(json report) {
  if (report.is_object()) report.erase("timestamp");
  return report;
}

json merge_reports(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path report = entry.path() / "report.json";
    if (entry.is_directory() && fs::exists(report)) paths.push_back(report);
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw IoError("no scenario reports under " + dir);

  json scenarios = json::array();
  json criteria = json::object();
  bool all = true;
  for (const fs::path& p : paths) {
    std::ifstream f(p);
    json r;
    try {
      r = json::parse(f);
    } catch (const json::exception& e) {
      throw IoError("cannot parse " + p.string() + ": " + e.what());
    }
    const bool passed = r.value("passed", false);
    all = all && passed;
    json failed = json::array();
    for (const json& a : r.value("assertions", json::array())) {
      const bool ok = a.value("passed", false);
      if (!ok) failed.push_back(a.value("id", ""));
      const int c = a.value("criterion", 0);
      if (c <= 0) continue;
      json& entry = criteria[std::to_string(c)];
      if (entry.is_null()) entry = {{"passed", true}, {"assertions", json::array()}};
      entry["passed"] = entry["passed"].get<bool>() && ok;
      entry["assertions"].push_back(r.value("scenario", "") + "/" + a.value("id", ""));
    }
    scenarios.push_back({{"scenario", r.value("scenario", p.parent_path().filename().string())},
                         {"passed", passed},
                         {"assertions", r.value("assertions", json::array()).size()},
                         {"failed", failed}});
  }
  return {{"timestamp", detail::utc_timestamp()},
          {"scenarios", scenarios},
          {"criteria", criteria},
          {"passed", all}};
}

}  // namespace affgeo
