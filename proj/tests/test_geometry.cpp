// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "affgeo/geometry.hpp"
#include "affgeo/manifolds.hpp"
#include "oracles.hpp"

using namespace affgeo;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(Christoffel, SphereMatchesClosedForm) {
  const auto m = make_sphere(1.0);
  for (double theta : {0.3, 0.9, 1.5, 2.4}) {
    const ChristoffelSymbols c = christoffel(*m, vec({theta, 0.7}));
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          EXPECT_NEAR(c(k, i, j), oracle::sphere_christoffel(k, i, j, theta), 1e-12)
              << k << i << j << " theta=" << theta;
  }
}

TEST(Christoffel, HalfPlaneMatchesClosedForm) {
  const auto m = make_hyperbolic(1.0);
  for (double y : {0.2, 1.0, 3.5}) {
    const ChristoffelSymbols c = christoffel(*m, vec({0.4, y}));
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          EXPECT_NEAR(c(k, i, j), oracle::halfplane_christoffel(k, i, j, y), 1e-12);
  }
}

TEST(Christoffel, RadiusDoesNotChangeConnection) {
  const auto a = make_sphere(1.0);
  const auto b = make_sphere(3.0);
  const Vec x = vec({1.1, -0.4});
  const ChristoffelSymbols ca = christoffel(*a, x), cb = christoffel(*b, x);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(ca(k, i, j), cb(k, i, j), 1e-12);
}

TEST(Christoffel, FiniteDifferencesAgreeWithAnalytic) {
  const auto m = make_sphere(1.0);
  const auto fd = with_finite_differences(m);
  EXPECT_EQ(fd->christoffel_mode(), ChristoffelMode::kFiniteDifference);
  const Vec x = vec({0.8, 1.3});
  const ChristoffelSymbols a = christoffel(*m, x), b = christoffel(*fd, x);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(a(k, i, j), b(k, i, j), 1e-7);
}

TEST(Christoffel, ProductIsBlockDiagonal) {
  const auto m = make_product({make_sphere(1.0), make_euclidean(1)});
  const Vec x = vec({1.2, 0.3, 5.0});
  const ChristoffelSymbols c = christoffel(*m, x);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const bool sphere_block = k < 2 && i < 2 && j < 2;
        const double want = sphere_block ? oracle::sphere_christoffel(k, i, j, 1.2) : 0.0;
        EXPECT_NEAR(c(k, i, j), want, 1e-12);
      }
}

TEST(Geodesic, GreatCircleClosedForm) {
  const auto m = make_sphere(1.0);
  const double s_end = std::numbers::pi / 2;
  // Unit-speed chart velocities (dtheta, dphi / sin theta components).
  const std::vector<std::array<double, 4>> cases = {
      {1.2, 0.0, 1.0, 0.0}, {1.0, 0.5, 0.6, 0.8}, {1.4, -1.0, -0.3, 0.9539392014169456}};
  for (const auto& c : cases) {
    const double theta = c[0], phi = c[1];
    const Vec v = vec({c[2], c[3] / std::sin(theta)});
    const GeodesicEnd e = flow_geodesic(*m, vec({theta, phi}), v, Mat(2, 0), s_end, 1024);
    const oracle::V2 want = oracle::great_circle(theta, phi, v[0], v[1], s_end);
    EXPECT_NEAR(e.x[0], want[0], 1e-6);
    EXPECT_NEAR(e.x[1], want[1], 1e-6);
  }
}

TEST(Geodesic, HyperbolicVerticalLine) {
  const auto m = make_hyperbolic(1.0);
  const GeodesicEnd e = flow_geodesic(*m, vec({0.3, 1.0}), vec({0.0, 1.0}), Mat(2, 0), 1.0, 1024);
  EXPECT_NEAR(e.x[0], 0.3, 1e-12);
  EXPECT_NEAR(e.x[1], std::exp(1.0), 1e-6);
}

TEST(Geodesic, FourthOrderConvergence) {
  const auto m = make_sphere(1.0);
  const Vec x = vec({1.0, 0.2}), v = vec({0.6, 0.8 / std::sin(1.0)});
  const oracle::V2 want = oracle::great_circle(1.0, 0.2, v[0], v[1], 1.2);
  auto err = [&](int n) {
    const GeodesicEnd e = flow_geodesic(*m, x, v, Mat(2, 0), 1.2, n);
    return (e.x - Vec(want)).norm();
  };
  const double ratio = err(16) / err(32);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Geodesic, SpeedIsConserved) {
  const auto m = make_hyperbolic(2.0);
  const Curve c = integrate_geodesic(*m, vec({0.0, 1.0}), {vec({0.0, 1.0}), vec({0.7, -0.2})}, 1.0, 256);
  EXPECT_LT(speed_drift(*m, c), 1e-8);
}

TEST(Geodesic, LeavingTheChartThrowsTruncation) {
  const auto m = make_sphere(1.0);
  try {
    flow_geodesic(*m, vec({1.0, 0.0}), vec({-1.0, 0.0}), Mat(2, 0), 2.0, 128);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.last_valid_t(), 0.5);
    EXPECT_LT(e.last_valid_t(), 0.81);
  }
}

TEST(Transport, FlatTransportIsConstant) {
  const auto m = make_euclidean(3);
  Mat w = Mat::Random(3, 2);
  const GeodesicEnd e = flow_geodesic(*m, vec({0, 0, 0}), vec({1, 2, -1}), w, 1.0, 16);
  EXPECT_LT((e.transported - w).norm(), 1e-14);
}

TEST(Transport, AlongEquatorKeepsMeridianDirection) {
  const auto m = make_sphere(1.0);
  const double half = std::numbers::pi / 2;
  const Mat w = vec({1.0, 0.0});
  const GeodesicEnd e = flow_geodesic(*m, vec({half, 0.0}), vec({0.0, 1.0}), w, 2.0, 256);
  EXPECT_NEAR(e.transported(0, 0), 1.0, 1e-10);
  EXPECT_NEAR(e.transported(1, 0), 0.0, 1e-10);
}

// Property: parallel transport preserves inner products.
TEST(Transport, IsAnIsometryProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto m = make_product({make_sphere(1.0), make_hyperbolic(1.0)});
  for (int trial = 0; trial < 25; ++trial) {
    const Vec x = vec({1.2 + 0.3 * u(rng), 0.5 * u(rng), 0.3 * u(rng), 1.0 + 0.2 * u(rng)});
    const Vec v = 0.4 * Vec::NullaryExpr(4, [&] { return u(rng); });
    Mat w = Mat::NullaryExpr(4, 2, [&] { return u(rng); });
    const GeodesicEnd e = flow_geodesic(*m, x, v, w, 1.0, 128);
    const Mat g0 = w.transpose() * m->metric(x) * w;
    const Mat g1 = e.transported.transpose() * m->metric(e.x) * e.transported;
    EXPECT_LT((g0 - g1).norm(), 1e-8) << "trial " << trial;
  }
}

// Property: log inverts exp inside the convexity radius.
TEST(Log, InvertsExpProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& m : {make_sphere(1.0), make_hyperbolic(1.0)}) {
    const Vec p = m->name().find("sphere") != std::string::npos ? vec({1.3, 0.1}) : vec({0.0, 1.0});
    for (int trial = 0; trial < 20; ++trial) {
      Vec v = Vec::NullaryExpr(2, [&] { return u(rng); });
      v *= 0.5 * m->convexity_radius() * std::abs(u(rng)) / m->norm(p, v);
      const Vec x = exp_map(*m, p, v, 128);
      const TangentVector t = riemannian_log(*m, p, x, 1e-12, {128, 60});
      EXPECT_LT((t.components - v).norm(), 1e-9) << m->name() << " trial " << trial;
    }
  }
}

TEST(Log, DistanceMatchesGreatCircle) {
  const auto m = make_sphere(1.0);
  const Vec p = vec({1.0, 0.0}), x = vec({1.4, 0.5});
  const TangentVector t = riemannian_log(*m, p, x, 1e-12);
  const double want = std::acos(oracle::embed(1.0, 0.0).dot(oracle::embed(1.4, 0.5)));
  EXPECT_NEAR(m->norm(p, t.components), want, 1e-9);
}

TEST(Frame, IsOrthonormalForTheMetric) {
  const auto m = make_product({make_sphere(2.0), make_euclidean(1)});
  const Vec p = vec({0.9, 0.4, 1.0});
  const Mat f = orthonormal_frame(*m, p);
  EXPECT_LT((f.transpose() * m->metric(p) * f - Mat::Identity(3, 3)).norm(), 1e-12);
}

TEST(Manifolds, JsonLoaderBuildsProducts) {
  const auto m = manifold_from_json(R"({"metric": {"name": "product", "factors": [
      {"name": "sphere", "radius": 2.0}, {"name": "euclidean", "dim": 1}]},
      "convexity_radius": 0.5})");
  EXPECT_EQ(m->dim(), 3);
  EXPECT_DOUBLE_EQ(m->convexity_radius(), 0.5);
  const Vec p = vec({1.0, 0.0, 0.0});
  EXPECT_NEAR(m->metric(p)(1, 1), 4.0 * std::sin(1.0) * std::sin(1.0), 1e-12);
}

TEST(Manifolds, JsonLoaderRejectsBadInput) {
  EXPECT_THROW(manifold_from_json("{"), ArgumentError);
  EXPECT_THROW(manifold_from_json(R"({"metric": {"name": "torus"}})"), ArgumentError);
  EXPECT_THROW(manifold_from_json(R"({"metric": {"name": "sphere"}, "domain": {"lo": [0], "hi": [1]}})"),
               ArgumentError);
}

TEST(Manifolds, JsonFiniteDifferenceOption) {
  const auto m = manifold_from_json(R"({"metric": {"name": "sphere"}, "h_fd": 1e-4})");
  EXPECT_EQ(m->christoffel_mode(), ChristoffelMode::kFiniteDifference);
}
