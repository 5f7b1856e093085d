// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C interface only.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "affgeo/affgeo.h"

namespace {

struct ManifoldDeleter {
  void operator()(affgeo_manifold* m) const { affgeo_manifold_free(m); }
};
using ManifoldPtr = std::unique_ptr<affgeo_manifold, ManifoldDeleter>;

ManifoldPtr builtin(const char* name, int dim = 2, double radius = 1.0) {
  affgeo_manifold* m = nullptr;
  EXPECT_EQ(affgeo_manifold_builtin(name, dim, radius, &m), AFFGEO_OK) << affgeo_last_error();
  return ManifoldPtr(m);
}

int identity_map(void*, const double* x, double* label) {
  label[0] = x[0];
  label[1] = x[1];
  return 0;
}

double euclid(void* ctx, const double* a, const double* b) {
  ++*static_cast<int*>(ctx);
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

int failing_map(void*, const double*, double*) { return 1; }

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(affgeo_version(), "");
  EXPECT_STREQ(affgeo_status_name(AFFGEO_ERR_TRUNCATION), "truncation");
  EXPECT_STREQ(affgeo_status_name(AFFGEO_OK), "ok");
}

TEST(CApi, ErrorsSetLastError) {
  affgeo_manifold* m = nullptr;
  EXPECT_EQ(affgeo_manifold_builtin("torus", 2, 1.0, &m), AFFGEO_ERR_ARGUMENT);
  EXPECT_EQ(m, nullptr);
  EXPECT_NE(std::string(affgeo_last_error()).find("torus"), std::string::npos);
  EXPECT_EQ(affgeo_manifold_from_json("{", &m), AFFGEO_ERR_ARGUMENT);
  EXPECT_EQ(affgeo_manifold_from_file("/nonexistent.json", &m), AFFGEO_ERR_IO);
  EXPECT_EQ(affgeo_metric(nullptr, nullptr, nullptr), AFFGEO_ERR_ARGUMENT);
  const auto s = builtin("sphere");
  EXPECT_EQ(affgeo_manifold_dim(s.get()), 2);
  EXPECT_STREQ(affgeo_last_error(), "");
}

TEST(CApi, MetricAndChristoffel) {
  const auto s = builtin("sphere", 0, 2.0);
  const double x[2] = {1.0, 0.3};
  double g[4], gamma[8];
  ASSERT_EQ(affgeo_metric(s.get(), x, g), AFFGEO_OK);
  EXPECT_NEAR(g[0], 4.0, 1e-14);
  EXPECT_NEAR(g[3], 4.0 * std::sin(1.0) * std::sin(1.0), 1e-14);
  EXPECT_NEAR(g[1], 0.0, 1e-14);
  ASSERT_EQ(affgeo_christoffel(s.get(), x, gamma), AFFGEO_OK);
  EXPECT_NEAR(gamma[(0 * 2 + 1) * 2 + 1], -std::sin(1.0) * std::cos(1.0), 1e-12);
  EXPECT_NEAR(gamma[(1 * 2 + 0) * 2 + 1], std::cos(1.0) / std::sin(1.0), 1e-12);
}

TEST(CApi, GeodesicTransportExpLog) {
  const auto h = builtin("hyperbolic");
  const double x[2] = {0.0, 1.0}, v[2] = {0.0, 1.0}, w[2] = {1.0, 0.0};
  double xe[2], ve[2], we[2];
  ASSERT_EQ(affgeo_geodesic(h.get(), x, v, 1.0, 512, xe, ve), AFFGEO_OK);
  EXPECT_NEAR(xe[1], std::exp(1.0), 1e-8);
  ASSERT_EQ(affgeo_transport(h.get(), x, v, w, 1.0, 512, we), AFFGEO_OK);
  // Unit length in the half-plane metric at the endpoint.
  EXPECT_NEAR(std::hypot(we[0], we[1]) / xe[1], 1.0, 1e-8);

  const double p[2] = {0.0, 1.0}, u[2] = {0.3, -0.2};
  double q[2], back[2];
  ASSERT_EQ(affgeo_exp(h.get(), p, u, 128, q), AFFGEO_OK);
  ASSERT_EQ(affgeo_log(h.get(), p, q, 1e-12, back), AFFGEO_OK);
  EXPECT_NEAR(back[0], u[0], 1e-9);
  EXPECT_NEAR(back[1], u[1], 1e-9);

  const auto s = builtin("sphere");
  const double sx[2] = {1.0, 0.0}, sv[2] = {-1.0, 0.0};
  EXPECT_EQ(affgeo_geodesic(s.get(), sx, sv, 2.0, 64, xe, ve), AFFGEO_ERR_TRUNCATION);
  EXPECT_EQ(affgeo_geodesic(s.get(), sx, sv, 0.1, 0, xe, ve), AFFGEO_ERR_ARGUMENT);
}

TEST(CApi, FrameAndProduct) {
  const auto a = builtin("sphere", 0, 2.0);
  const auto b = builtin("euclidean", 1);
  const affgeo_manifold* factors[2] = {a.get(), b.get()};
  affgeo_manifold* prod = nullptr;
  ASSERT_EQ(affgeo_manifold_product(factors, 2, &prod), AFFGEO_OK);
  ManifoldPtr p(prod);
  EXPECT_EQ(affgeo_manifold_dim(p.get()), 3);
  const double x[3] = {1.0, 0.0, 0.0};
  double f[9];
  ASSERT_EQ(affgeo_orthonormal_frame(p.get(), x, f), AFFGEO_OK);
  EXPECT_NEAR(f[0], 0.5, 1e-14);
  EXPECT_NEAR(f[8], 1.0, 1e-14);
}

TEST(CApi, HolonomyAndSplittingBufferProtocol) {
  const auto s = builtin("sphere");
  const double p[2] = {1.5707963267948966, 0.0};
  affgeo_holonomy* sample = nullptr;
  ASSERT_EQ(affgeo_holonomy_sample(s.get(), p, 8, 0.5, 3, &sample), AFFGEO_OK);
  affgeo_holonomy* closed = nullptr;
  ASSERT_EQ(affgeo_holonomy_closure(sample, 32, 1e-2, &closed), AFFGEO_OK);
  EXPECT_GT(affgeo_holonomy_size(closed), affgeo_holonomy_size(sample));
  EXPECT_EQ(affgeo_holonomy_dim(closed), 2);
  double a[4];
  ASSERT_EQ(affgeo_holonomy_element(closed, 0, a), AFFGEO_OK);
  EXPECT_NEAR(a[0] * a[3] - a[1] * a[2], 1.0, 1e-8);
  EXPECT_EQ(affgeo_holonomy_element(closed, 1u << 30, a), AFFGEO_ERR_ARGUMENT);

  int transitive = 0;
  double score = 0.0;
  ASSERT_EQ(affgeo_holonomy_transitivity(closed, 200, 0.1, 1, &transitive, &score), AFFGEO_OK);
  EXPECT_EQ(transitive, 1);
  EXPECT_LE(score, 0.1);

  size_t needed = 0;
  EXPECT_EQ(affgeo_holonomy_splitting(closed, 1e-3, 1, nullptr, 0, &needed), AFFGEO_ERR_BUFFER);
  ASSERT_GT(needed, 1u);
  std::string buf(needed, '\0');
  ASSERT_EQ(affgeo_holonomy_splitting(closed, 1e-3, 1, buf.data(), buf.size(), &needed), AFFGEO_OK);
  EXPECT_NE(buf.find("\"block_dims\":[2]"), std::string::npos) << buf;

  affgeo_norm* linf = nullptr;
  ASSERT_EQ(affgeo_norm_builtin("linf", 2, 720, &linf), AFFGEO_OK);
  affgeo_norm* avg = nullptr;
  ASSERT_EQ(affgeo_norm_average(linf, closed, &avg), AFFGEO_OK);
  double d = 1.0, inv = 1.0;
  ASSERT_EQ(affgeo_norm_distance_to_euclidean(avg, &d), AFFGEO_OK);
  EXPECT_LT(d, 0.02);
  ASSERT_EQ(affgeo_norm_invariance_residual(linf, closed, &inv), AFFGEO_OK);
  EXPECT_GT(inv, 0.01);
  const double seed[2] = {1.0, 0.0};
  affgeo_norm* hull = nullptr;
  ASSERT_EQ(affgeo_norm_orbit_hull(closed, seed, 360, &hull), AFFGEO_OK);
  EXPECT_EQ(affgeo_norm_dim(hull), 2);

  affgeo_norm_free(hull);
  affgeo_norm_free(avg);
  affgeo_norm_free(linf);
  affgeo_holonomy_free(closed);
  affgeo_holonomy_free(sample);
}

TEST(CApi, Norms) {
  affgeo_norm *linf = nullptr, *l1 = nullptr, *smooth = nullptr;
  ASSERT_EQ(affgeo_norm_builtin("linf", 2, 720, &linf), AFFGEO_OK);
  ASSERT_EQ(affgeo_norm_builtin("l1", 2, 720, &l1), AFFGEO_OK);
  EXPECT_EQ(affgeo_norm_builtin("l7", 2, 720, &smooth), AFFGEO_ERR_ARGUMENT);
  const double v[2] = {3.0, -4.0};
  double x = 0.0;
  ASSERT_EQ(affgeo_norm_eval(linf, v, &x), AFFGEO_OK);
  EXPECT_DOUBLE_EQ(x, 4.0);
  ASSERT_EQ(affgeo_norm_distance(linf, l1, &x), AFFGEO_OK);
  EXPECT_NEAR(x, std::log(2.0), 1e-12);
  ASSERT_EQ(affgeo_norm_distance_to_euclidean(linf, &x), AFFGEO_OK);
  EXPECT_NEAR(x, std::log(2.0) / 4, 1e-12);

  double dist = 0.0, eig = 0.0, res = 0.0;
  int mink = 0;
  EXPECT_EQ(affgeo_norm_smooth(linf, 1.5, &smooth, &dist), AFFGEO_ERR_ARGUMENT);
  ASSERT_EQ(affgeo_norm_smooth(linf, 0.1, &smooth, &dist), AFFGEO_OK);
  EXPECT_GT(dist, 0.0);
  ASSERT_EQ(affgeo_norm_minkowski_check(smooth, 20, 1, &eig, &res, &mink), AFFGEO_OK);
  EXPECT_EQ(mink, 1);

  const auto path = std::filesystem::temp_directory_path() / "affgeo_capi.csv";
  ASSERT_EQ(affgeo_norm_export_csv(smooth, path.string().c_str()), AFFGEO_OK);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
  EXPECT_EQ(affgeo_norm_export_csv(smooth, "/nonexistent-dir/x.csv"), AFFGEO_ERR_IO);

  affgeo_norm_free(smooth);
  affgeo_norm_free(l1);
  affgeo_norm_free(linf);
}

TEST(CApi, CallbackOracle) {
  const auto plane = builtin("euclidean", 2);
  int calls = 0;
  affgeo_oracle* o = nullptr;
  ASSERT_EQ(affgeo_oracle_create(plane.get(), 2, identity_map, euclid, &calls, &o), AFFGEO_OK);
  const double p[2] = {0.0, 0.0}, v[2] = {3.0, 4.0};
  double value = 0.0, residual = 1.0;
  ASSERT_EQ(affgeo_metric_differential(o, p, v, &value, &residual), AFFGEO_OK);
  EXPECT_NEAR(value, 5.0, 1e-10);
  EXPECT_LT(residual, 1e-10);
  EXPECT_GT(calls, 0);

  const double lo[2] = {-2, -2}, hi[2] = {2, 2};
  size_t needed = 0;
  std::string buf(4096, '\0');
  ASSERT_EQ(affgeo_affinity(o, lo, hi, 3, 1, buf.data(), buf.size(), &needed), AFFGEO_OK)
      << affgeo_last_error();
  EXPECT_NE(buf.find("\"verdict\":\"affine\""), std::string::npos) << buf;
  affgeo_oracle_free(o);

  ASSERT_EQ(affgeo_oracle_create(plane.get(), 2, failing_map, euclid, &calls, &o), AFFGEO_OK);
  EXPECT_EQ(affgeo_metric_differential(o, p, v, &value, &residual), AFFGEO_ERR_DOMAIN);
  affgeo_oracle_free(o);

  const auto s = builtin("sphere");
  ASSERT_EQ(affgeo_oracle_identity(s.get(), "great-circle", &o), AFFGEO_OK);
  const double sp[2] = {1.2, 0.0}, sv[2] = {1.0, 0.0};
  ASSERT_EQ(affgeo_metric_differential(o, sp, sv, &value, &residual), AFFGEO_OK);
  EXPECT_NEAR(value, 1.0, 1e-6);
  affgeo_oracle_free(o);
  EXPECT_EQ(affgeo_oracle_identity(s.get(), "taxicab", &o), AFFGEO_ERR_ARGUMENT);
}

TEST(CApi, Scenarios) {
  ASSERT_GE(affgeo_scenario_count(), 12u);
  std::vector<std::string> names;
  for (size_t i = 0; i < affgeo_scenario_count(); ++i) names.emplace_back(affgeo_scenario_name(i));
  EXPECT_NE(std::find(names.begin(), names.end(), "mainlemma-sphere"), names.end());
  EXPECT_EQ(affgeo_scenario_name(affgeo_scenario_count()), nullptr);

  const auto dir = std::filesystem::temp_directory_path() / "affgeo_capi_run";
  std::filesystem::remove_all(dir);
  affgeo_run_config cfg;
  affgeo_run_config_init(&cfg);
  cfg.config_json = R"({"scenarios": {"nope": {}}})";
  int failed = -1;
  EXPECT_EQ(affgeo_run("geodesic-oracles", dir.string().c_str(), &cfg, &failed), AFFGEO_ERR_ARGUMENT);
  cfg.config_json = R"({"seed": 4, "scenarios": {"geodesic-oracles": {"great_circles": 2}}})";
  ASSERT_EQ(affgeo_run("geodesic-oracles", dir.string().c_str(), &cfg, &failed), AFFGEO_OK)
      << affgeo_last_error();
  EXPECT_EQ(failed, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "geodesic-oracles" / "report.json"));
  EXPECT_EQ(affgeo_run("nope", dir.string().c_str(), &cfg, &failed), AFFGEO_ERR_ARGUMENT);

  int all = 0;
  const std::string summary = (dir / "summary.json").string();
  ASSERT_EQ(affgeo_merge_reports(dir.string().c_str(), summary.c_str(), &all), AFFGEO_OK);
  EXPECT_EQ(all, 1);
  std::filesystem::remove_all(dir);
}
