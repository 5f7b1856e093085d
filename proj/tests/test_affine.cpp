// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "affgeo/affine.hpp"
#include "affgeo/manifolds.hpp"
#include "affgeo/oracles.hpp"
#include "oracles.hpp"

using namespace affgeo;
namespace orc = affgeo::oracles;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Box box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  return {vec(lo), vec(hi)};
}

const ChartManifold::Ptr& plane() {
  static const ChartManifold::Ptr m = make_euclidean(2);
  return m;
}

const ChartManifold::Ptr& sphere() {
  static const ChartManifold::Ptr m = make_sphere(1.0);
  return m;
}

}  // namespace

TEST(Oracles, ClosedFormDistances) {
  const Vec a = vec({0.0, 0.0}), b = vec({3.0, -4.0});
  EXPECT_DOUBLE_EQ(orc::euclidean_distance()(a, b), 5.0);
  EXPECT_DOUBLE_EQ(orc::linf_distance()(a, b), 4.0);
  EXPECT_DOUBLE_EQ(orc::l1_distance()(a, b), 7.0);
  EXPECT_NEAR(orc::half_power_distance()(a, b), std::pow(std::sqrt(3.0) + 2.0, 2), 1e-12);
  const Vec p = vec({1.0, 0.2}), q = vec({1.4, 0.9});
  EXPECT_NEAR(orc::great_circle_distance(2.0)(p, q),
              2.0 * std::acos(oracle::embed(1.0, 0.2).dot(oracle::embed(1.4, 0.9))), 1e-12);
  EXPECT_NEAR(orc::hyperbolic_distance()(vec({0.0, 1.0}), vec({0.0, std::exp(1.5)})), 1.5, 1e-12);
}

TEST(Oracles, ProductDistance) {
  const auto d = orc::product_distance(
      {{0, 1, orc::euclidean_distance()}, {1, 2, orc::linf_distance()}}, true);
  EXPECT_DOUBLE_EQ(d(vec({0, 0, 0}), vec({-2, 1, 3})), 2.0 + 3.0);
  const auto d2 = orc::product_distance(
      {{0, 1, orc::euclidean_distance()}, {1, 2, orc::linf_distance()}}, false);
  EXPECT_NEAR(d2(vec({0, 0, 0}), vec({-2, 1, 3})), std::sqrt(13.0), 1e-12);
}

TEST(OracleDefects, DetectsTriangleViolation) {
  const OracleDefects good = oracle_metric_defects(
      orc::make("linf", plane(), orc::identity_map(), orc::linf_distance()),
      box({-2, -2}, {2, 2}), 200, 1);
  EXPECT_LT(good.symmetry + good.triangle + good.self_distance, 1e-12);
  const OracleDefects bad = oracle_metric_defects(
      orc::make("half", plane(), orc::identity_map(), orc::half_power_distance()),
      box({-2, -2}, {2, 2}), 200, 1);
  EXPECT_GT(bad.triangle, 1e-2);
}

TEST(MetricDifferential, IdentityIntoEuclidean) {
  const MapOracle o = orc::make("id", plane(), orc::identity_map(), orc::euclidean_distance());
  const MetricDifferential d = metric_differential(o, {vec({0.5, -1.0}), vec({3.0, 4.0})});
  EXPECT_NEAR(d.value, 5.0, 1e-10);
  EXPECT_LT(d.residual, 1e-10);
}

// Property: the differential of a linear change of metric is that norm.
TEST(MetricDifferential, LinfChangeIsLinf) {
  const MapOracle o = orc::make("linf", plane(), orc::identity_map(), orc::linf_distance());
  for (const Vec& v : {vec({1.0, 0.3}), vec({-0.2, 0.9}), vec({1.0, -1.0})})
    EXPECT_NEAR(metric_differential(o, {vec({0.1, 0.2}), v}).value, oracle::linf(v), 1e-10);
}

TEST(MetricDifferential, SphereHomothetyHasConstantTwo) {
  const MapOracle o = orc::make("h", sphere(), orc::identity_map(), orc::great_circle_distance(2.0));
  const Vec p = vec({1.2, 0.4});
  const Vec v = vec({0.3, 0.5});
  const MetricDifferential d = metric_differential(o, {p, v}, {128, {}});
  EXPECT_NEAR(d.value, 2.0 * sphere()->norm(p, v), 1e-6);
}

TEST(MetricDifferential, ConstantMapIsZero) {
  const MapOracle o = orc::make("c", sphere(), orc::constant_map(vec({1.0, 0.0})),
                                orc::great_circle_distance());
  EXPECT_EQ(metric_differential(o, {vec({1.2, 0.4}), vec({0.3, 0.5})}).value, 0.0);
}

TEST(MetricDifferential, DefaultTimesScaleWithRadius) {
  const std::vector<double> t = default_t_list(*sphere());
  ASSERT_EQ(t.size(), 7u);
  EXPECT_NEAR(t.front(), 0.1 * sphere()->convexity_radius(), 1e-15);
  for (size_t i = 1; i < t.size(); ++i) EXPECT_DOUBLE_EQ(t[i], t[i - 1] / 2);
}

TEST(DifferentialNorm, SeminormOfProjection) {
  const auto space = make_euclidean(3);
  const MapOracle o = orc::make("proj", space, orc::coordinate_map({0, 1}), orc::l1_distance());
  const NormField q = differential_norm(o, Vec::Zero(3), 180);
  EXPECT_NEAR(q(vec({1.0, -2.0, 7.0})), 3.0, 1e-10);
  EXPECT_LT(q.grid_min(), 1e-10);
  EXPECT_LT(seminorm_check(o, Vec::Zero(3), 50, 1), 1e-9);
}

TEST(Kernel, ProjectionKernelIsDroppedAxis) {
  const auto space = make_euclidean(3);
  const MapOracle o = orc::make("proj", space, orc::coordinate_map({0, 1}), orc::l1_distance());
  const KernelReport k = kernel_distribution(o, vec({0.5, 0.5, 0.5}), 180);
  ASSERT_EQ(k.dim, 1);
  EXPECT_NEAR(std::abs(k.basis_chart(2, 0)), 1.0, 1e-8);
  const MapOracle full = orc::make("id", space, orc::identity_map(), orc::l1_distance());
  EXPECT_EQ(kernel_distribution(full, Vec::Zero(3), 180).dim, 0);
  const MapOracle zero = orc::make("c", space, orc::constant_map(Vec::Zero(3)), orc::l1_distance());
  EXPECT_EQ(kernel_distribution(zero, Vec::Zero(3), 180).dim, 3);
}

TEST(Kernel, PrincipalAngles) {
  const Mat x = Vec::Unit(3, 0);
  Mat r(3, 1);
  r << std::cos(0.3), std::sin(0.3), 0.0;
  EXPECT_NEAR(max_principal_angle(x, x), 0.0, 1e-7);
  EXPECT_NEAR(max_principal_angle(x, r), 0.3, 1e-12);
  EXPECT_NEAR(max_principal_angle(x, Mat::Identity(3, 2)), std::numbers::pi / 2, 1e-15);
}

TEST(Affinity, LinfChangeIsAffine) {
  const MapOracle o = orc::make("linf", plane(), orc::identity_map(), orc::linf_distance());
  AffinityOptions opts;
  opts.segment_length = 2.5;
  const AffinityReport r = affinity_test(o, box({-3, -3}, {3, 3}), 6, 3, opts);
  EXPECT_EQ(r.verdict, Verdict::kAffine);
  EXPECT_LE(r.linearity_residual, 1e-4);
  EXPECT_TRUE(std::isnan(r.parallel_residual));
  EXPECT_EQ(r.n_segments, 6);
}

TEST(Affinity, SineWarpIsNotAffine) {
  const MapOracle o = orc::make("warp", plane(), orc::sine_warp_map(0.3), orc::euclidean_distance());
  AffinityOptions opts;
  opts.segment_length = 2.5;
  const AffinityReport r = affinity_test(o, box({-3, -3}, {3, 3}), 6, 3, opts);
  EXPECT_EQ(r.verdict, Verdict::kNotAffine);
  EXPECT_GE(r.linearity_residual, 1e-2);
}

TEST(Affinity, ClassifyUsesThresholds) {
  AffinityReport r;
  classify(r);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
  r.linearity_residual = 1e-6;
  r.parallel_residual = 1e-6;
  r.seminorm_residual = 0.0;
  classify(r);
  EXPECT_EQ(r.verdict, Verdict::kAffine);
  r.linearity_residual = 5e-4;
  classify(r);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
  r.linearity_residual = 2e-3;
  classify(r);
  EXPECT_EQ(r.verdict, Verdict::kNotAffine);
  EXPECT_STREQ(to_string(Verdict::kNotAffine), "not_affine");
}

TEST(Parallel, HomothetyIsParallelAndChartOracleIsNot) {
  const Box region = box({1.2, -0.3}, {1.9, 0.3});
  const MapOracle h = orc::make("h", sphere(), orc::identity_map(), orc::great_circle_distance(2.0));
  EXPECT_LE(parallel_invariance_suite(h, region, 5, 6, 0.5, 1), 1e-4);
  const MapOracle chart = orc::make("chart", sphere(), orc::identity_map(), orc::euclidean_distance());
  EXPECT_GT(parallel_invariance_suite(chart, region, 5, 6, 0.5, 1), 0.05);
}

TEST(Regularity, LinfCornerAndSmoothDirection) {
  const MapOracle o = orc::make("linf", plane(), orc::identity_map(), orc::linf_distance());
  const Vec p = Vec::Zero(2);
  const std::vector<double> t = {0.1, 0.05, 0.025, 0.0125};
  const RegularityEstimate corner = regular_vector_test(o, {p, vec({1, 1})}, {p, vec({1, -1})}, t);
  EXPECT_NEAR(corner.limit, 2.0, 1e-6);
  EXPECT_FALSE(corner.regular);
  const RegularityEstimate smooth = regular_vector_test(o, {p, vec({1, 0})}, {p, vec({0, 1})}, t);
  EXPECT_LE(std::abs(smooth.limit), 1e-9);
  EXPECT_TRUE(smooth.regular);
}

TEST(MainLemma, FlatRatioVanishes) {
  const auto m = make_euclidean(2);
  const std::vector<MainLemmaPoint> pts =
      mainlemma_check(*m, Vec::Zero(2), {Vec::Zero(2), vec({1, 0})}, {Vec::Zero(2), vec({0, 1})},
                      {0.4, 0.2, 0.1});
  ASSERT_EQ(pts.size(), 3u);
  for (const MainLemmaPoint& p : pts) {
    EXPECT_TRUE(p.converged);
    EXPECT_LT(p.ratio, 1e-8);
  }
}

TEST(MainLemma, SphereRatioShrinksWithRadius) {
  const std::vector<MainLemmaPoint> pts =
      mainlemma_check(*sphere(), vec({std::numbers::pi / 2, 0.0}),
                      {vec({std::numbers::pi / 2, 0.0}), vec({0, 1})},
                      {vec({std::numbers::pi / 2, 0.0}), vec({1, 0})}, {0.4, 0.2, 0.1});
  ASSERT_EQ(pts.size(), 3u);
  for (size_t i = 0; i < pts.size(); ++i) {
    EXPECT_TRUE(pts[i].converged) << pts[i].error;
    if (i > 0) {
      EXPECT_LT(pts[i].ratio, pts[i - 1].ratio);
    }
  }
}

TEST(Decomposition, ProjectionToL1Plane) {
  const auto space = make_euclidean(3);
  const auto flat = make_euclidean(2);
  const MapOracle o = orc::make("p", space, orc::coordinate_map({0, 1}), orc::l1_distance());
  DeclaredDecomposition declared{
      orc::make("drop", space, orc::coordinate_map({0, 1}), orc::euclidean_distance()), flat,
      [](const Vec&) { return l1_norm(2, 180); },
      orc::make("id", flat, orc::identity_map(), orc::l1_distance())};
  DecompositionOptions opts;
  opts.n_points = 2;
  opts.n_pairs = 6;
  opts.kernel_grid = 90;
  const Box region = box({-2, -2, -2}, {2, 2, 2});
  const DecompositionReport good = verify_decomposition(o, region, declared, opts);
  ASSERT_EQ(good.checks.size(), 4u);
  EXPECT_TRUE(good.passed);
  for (const FactorCheck& c : good.checks) EXPECT_LE(c.value, 1e-8) << c.name;

  declared.projection = orc::make("wrong", space, orc::coordinate_map({1, 2}), orc::euclidean_distance());
  const DecompositionReport bad = verify_decomposition(o, region, declared, opts);
  EXPECT_FALSE(bad.passed);
  EXPECT_EQ(bad.checks.at(0).name, "a_projection_fibers");
  EXPECT_GE(bad.checks.at(0).value, 1.0);
}
