// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "affgeo/holonomy.hpp"
#include "affgeo/manifolds.hpp"
#include "affgeo/norms.hpp"
#include "oracles.hpp"

using namespace affgeo;

namespace {

HolonomySample rotations(const std::vector<double>& angles) {
  HolonomySample s;
  s.base = Vec::Zero(2);
  s.frame = Mat::Identity(2, 2);
  for (double a : angles) {
    Mat r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    s.elements.push_back(r);
    s.loops.emplace_back();
  }
  return s;
}

}  // namespace

TEST(SphereGrid, SizesAndUnitLength) {
  EXPECT_EQ(sphere_grid(2, 720)->size(), 720u);
  EXPECT_EQ(sphere_grid(3, 720)->size(), 2562u);
  for (int dim : {2, 3, 4}) {
    const auto g = sphere_grid(dim, 720);
    ASSERT_FALSE(g->empty());
    for (const Vec& u : *g) {
      ASSERT_EQ(u.size(), dim);
      EXPECT_NEAR(u.norm(), 1.0, 1e-12);
    }
  }
}

TEST(SphereGrid, IsCached) {
  EXPECT_EQ(sphere_grid(3, 180).get(), sphere_grid(3, 180).get());
}

TEST(SphereGrid, FourDimensionalGridCoversTheSphere) {
  // Every random direction has a grid neighbour within a modest angle.
  const auto g = sphere_grid(4, 720);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Vec u = Vec::NullaryExpr(4, [&] { return n(rng); }).normalized();
    double best = -1.0;
    for (const Vec& w : *g) best = std::max(best, u.dot(w));
    worst = std::max(worst, std::acos(std::min(1.0, best)));
  }
  EXPECT_LT(worst, 0.35);
}

TEST(Norms, BuiltinsMatchClosedForms) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const NormField linf = linf_norm(3), l1 = l1_norm(3), e = euclidean_norm(3);
  for (int i = 0; i < 50; ++i) {
    const Vec v = Vec::NullaryExpr(3, [&] { return u(rng); });
    EXPECT_NEAR(linf(v), oracle::linf(v), 1e-14);
    EXPECT_NEAR(l1(v), oracle::l1(v), 1e-14);
    EXPECT_NEAR(e(v), v.norm(), 1e-14);
  }
}

// Property: the built-in norms are absolutely homogeneous and convex.
TEST(Norms, HomogeneousAndConvexProperty) {
  for (const NormField& q : {linf_norm(2), l1_norm(3), euclidean_norm(4, 180)}) {
    EXPECT_LT(homogeneity_defect(q, 200, 3), 1e-12);
    EXPECT_LE(convexity_defect(q, 200, 3), 1e-12);
  }
}

TEST(Norms, NonConvexGaugeHasConvexityDefect) {
  const NormField half(2, [](const Vec& v) {
    const double s = std::sqrt(std::abs(v[0])) + std::sqrt(std::abs(v[1]));
    return s * s;
  }, NormKind::kNorm, 360);
  EXPECT_GT(convexity_defect(half, 400, 1), 1e-2);
}

TEST(Norms, DistanceToEuclideanOfLinf) {
  // On the unit circle l-infinity spans [1/sqrt 2, 1]: half the log spread.
  EXPECT_NEAR(distance_to_euclidean(linf_norm(2)), std::log(2.0) / 4.0, 1e-12);
  EXPECT_NEAR(distance_to_euclidean(l1_norm(2)), std::log(2.0) / 4.0, 1e-12);
  EXPECT_NEAR(distance_to_euclidean(scaled(euclidean_norm(3), 2.5)), 0.0, 1e-12);
}

TEST(Norms, DistanceBetweenL1AndLinf) {
  EXPECT_NEAR(norm_distance(l1_norm(2), linf_norm(2)), std::log(2.0), 1e-12);
  EXPECT_NEAR(norm_distance(linf_norm(2), scaled(linf_norm(2), 3.0)), std::log(3.0), 1e-12);
}

TEST(Averaging, IdentityGroupLeavesNormUnchanged) {
  const NormField q = linf_norm(2);
  const NormField a = average_norm(q, rotations({0.0}));
  EXPECT_LT(norm_distance(q, a), 1e-12);
}

TEST(Averaging, QuarterTurnsPreserveLinf) {
  const NormField q = linf_norm(2);
  const HolonomySample g = rotations({0.0, std::numbers::pi / 2, std::numbers::pi, 1.5 * std::numbers::pi});
  EXPECT_LT(invariance_residual(q, g), 1e-12);
  EXPECT_LT(norm_distance(q, average_norm(q, g)), 1e-12);
}

TEST(Averaging, DenseRotationsRoundOff) {
  std::vector<double> angles;
  for (int i = 0; i < 64; ++i) angles.push_back(2.0 * std::numbers::pi * i / 64.0);
  const NormField a = average_norm(linf_norm(2), rotations(angles));
  EXPECT_LT(distance_to_euclidean(a), 1e-3);
  EXPECT_LT(invariance_residual(a, rotations({0.3, 1.1})), 2e-3);
}

TEST(Averaging, EuclideanIsInvariantUnderHolonomy) {
  const auto m = make_sphere(1.0);
  Vec p(2);
  p << 1.3, 0.0;
  const HolonomySample s = sample_holonomy(*m, p, 5, 0.4, 1);
  EXPECT_LT(invariance_residual(euclidean_norm(2), s), 1e-8);
}

TEST(PolytopeGauge, MatchesPolygonOracleProperty) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec> verts;
    std::vector<oracle::V2> overts;
    for (int i = 0; i < 5; ++i) {
      const oracle::V2 v{u(rng), u(rng)};
      verts.push_back(v);
      overts.push_back(v);
    }
    const PolytopeGauge g(verts);
    EXPECT_EQ(g.rank(), 2);
    for (int k = 0; k < 20; ++k) {
      const oracle::V2 x{u(rng), u(rng)};
      EXPECT_NEAR(g(x), oracle::polygon_gauge(overts, x), 1e-8) << "trial " << trial;
    }
  }
}

TEST(PolytopeGauge, CrossPolytopeIsL1) {
  std::vector<Vec> verts;
  for (int i = 0; i < 3; ++i) verts.push_back(Vec::Unit(3, i));
  const PolytopeGauge g(verts);
  Vec x(3);
  x << 0.3, -1.2, 2.0;
  EXPECT_NEAR(g(x), oracle::l1(x), 1e-10);
  EXPECT_EQ(g.fallbacks(), 0u);
}

TEST(OrbitHull, DegenerateHullIsSeminorm) {
  const NormField q = orbit_hull_norm(rotations({0.0}), Vec::Unit(2, 0), 360);
  EXPECT_EQ(q.kind(), NormKind::kSeminorm);
  Vec x(2);
  x << 0.7, 5.0;
  EXPECT_NEAR(q(x), 0.7, 1e-10);
}

TEST(OrbitHull, QuarterTurnOrbitOfAxisIsL1) {
  const HolonomySample g = rotations({0.0, std::numbers::pi / 2});
  const NormField q = orbit_hull_norm(g, Vec::Unit(2, 0), 360);
  EXPECT_LT(norm_distance(q, l1_norm(2, 360)), 1e-9);
  EXPECT_LT(invariance_residual(q, g), 1e-9);
}

TEST(BlockSum, TwoLinesGiveL1) {
  SplittingReport split;
  split.subspace_bases = {Mat(Vec::Unit(2, 0)), Mat(Vec::Unit(2, 1))};
  split.block_dims = {1, 1};
  const NormField q = block_sum_norm(split, {euclidean_norm(1, 8), euclidean_norm(1, 8)}, 720);
  EXPECT_LT(norm_distance(q, l1_norm(2)), 1e-12);
  EXPECT_NEAR(distance_to_euclidean(q), std::log(2.0) / 4.0, 1e-12);
}

TEST(Smoothing, StaysCloseAndBecomesMinkowski) {
  const NormField q = linf_norm(2, 720);
  const MinkowskiReport before = minkowski_check(q, 40, 1);
  EXPECT_FALSE(before.minkowski);
  for (double eps : {0.05, 0.1}) {
    const SmoothedNorm s = minkowski_smooth(q, eps);
    EXPECT_LT(s.distance, 2.0 * eps) << eps;
    EXPECT_NEAR(s.constant, s.distance / eps, 1e-12);
    const MinkowskiReport after = minkowski_check(s.norm, 40, 1);
    EXPECT_TRUE(after.minkowski) << eps;
    EXPECT_GT(after.hessian_min_eigen, 0.0);
  }
}

TEST(Smoothing, EuclideanIsFixed) {
  const SmoothedNorm s = minkowski_smooth(euclidean_norm(3, 180), 0.1);
  EXPECT_LT(s.distance, 1e-9);
  EXPECT_TRUE(minkowski_check(s.norm, 20, 2).minkowski);
}

TEST(Section, RestrictionOfL1ToCoordinatePlane) {
  Mat basis = Mat::Zero(4, 2);
  basis(0, 0) = 1.0;
  basis(2, 1) = 1.0;
  const NormField r = restrict_norm_to_section(l1_norm(4, 180), basis, 360);
  EXPECT_LT(norm_distance(r, l1_norm(2, 360)), 1e-12);
}

TEST(Csv, HeaderFirstAndOneRowPerDirection) {
  const std::filesystem::path path = std::filesystem::temp_directory_path() / "affgeo_grid_test.csv";
  const NormField q = linf_norm(2, 36);
  export_grid_csv(q, path.string());
  std::ifstream f(path);
  std::string line;
  ASSERT_TRUE(std::getline(f, line));
  EXPECT_EQ(line, "u0,u1,value");
  size_t rows = 0;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, q.directions().size());
  std::filesystem::remove(path);
}

TEST(Csv, UnwritablePathThrowsIo) {
  EXPECT_THROW(export_grid_csv(linf_norm(2, 36), "/nonexistent-dir/x.csv"), IoError);
}
