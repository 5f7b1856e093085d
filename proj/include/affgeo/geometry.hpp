// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "affgeo/error.hpp"

namespace affgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Axis-aligned box of admissible chart coordinates.
struct Box {
  Vec lo;
  Vec hi;

  bool contains(const Vec& x) const;
  // Smallest edge length; used to scale finite-difference steps.
  double scale() const;
};

// Gamma^k_{ij}, stored densely as [k][i][j].
class ChristoffelSymbols {
 public:
  explicit ChristoffelSymbols(int dim)
      : dim_(dim), data_(static_cast<size_t>(dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

  // Contracts Gamma^k_{ij} a^i b^j.
  Vec contract(const Vec& a, const Vec& b) const;
  // Contracts Gamma^k_{ij} a^i B^j_c column by column.
  Mat contract(const Vec& a, const Mat& b) const;

 private:
  size_t index(int k, int i, int j) const {
    return static_cast<size_t>((k * dim_ + i) * dim_ + j);
  }
  int dim_;
  std::vector<double> data_;
};

enum class ChristoffelMode { kAnalytic, kFiniteDifference };

// A single coordinate chart with an explicit metric tensor field. Immutable
// once built; share through ChartManifold::Ptr.
class ChartManifold {
 public:
  using Ptr = std::shared_ptr<const ChartManifold>;
  using MetricFn = std::function<Mat(const Vec&)>;
  // Returns the partial derivatives d_l g, one dim x dim matrix per l.
  using MetricDerivativeFn = std::function<std::vector<Mat>(const Vec&)>;

  // Christoffels from the analytic metric derivative callback.
  static Ptr analytic(std::string name, int dim, MetricFn metric,
                      MetricDerivativeFn derivative, Box domain,
                      double convexity_radius);
  // Christoffels by central differences of the metric; h_fd <= 0 selects the
  // default 1e-4 * domain scale.
  static Ptr finite_difference(std::string name, int dim, MetricFn metric,
                               Box domain, double convexity_radius,
                               double h_fd = 0.0);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Box& domain() const { return domain_; }
  ChristoffelMode christoffel_mode() const { return mode_; }
  double h_fd() const { return h_fd_; }
  // Radius of the neighbourhoods in which local statements are exercised.
  double convexity_radius() const { return convexity_radius_; }

  bool in_domain(const Vec& x) const { return domain_.contains(x); }
  Mat metric(const Vec& x) const;
  // d_l g for l = 0..dim-1, analytic or by central differences.
  std::vector<Mat> metric_derivative(const Vec& x) const;
  double inner(const Vec& x, const Vec& a, const Vec& b) const;
  double norm(const Vec& x, const Vec& v) const;

 private:
  ChartManifold() = default;

  std::string name_;
  int dim_ = 0;
  MetricFn metric_;
  MetricDerivativeFn derivative_;
  Box domain_;
  ChristoffelMode mode_ = ChristoffelMode::kAnalytic;
  double h_fd_ = 0.0;
  double convexity_radius_ = 0.0;
};

struct TangentVector {
  Vec base;
  Vec components;
};

enum class CurveKind { kGeodesic, kPolygon, kGeneric };

struct CurveNode {
  double t = 0.0;
  Vec x;
  // Chart velocity; filled for geodesics, empty otherwise.
  Vec velocity;
};

struct Curve {
  std::vector<CurveNode> nodes;
  CurveKind kind = CurveKind::kGeneric;

  const Vec& start() const { return nodes.front().x; }
  const Vec& end() const { return nodes.back().x; }
};

// Levi-Civita connection coefficients at x.
ChristoffelSymbols christoffel(const ChartManifold& m, const Vec& x);

struct GeodesicEnd {
  Vec x;
  Vec velocity;
  // Vectors carried along by parallel transport, one per column.
  Mat transported;
};

// Integrates the geodesic (x, u) together with parallel transport of the
// columns of `carried` over [0, t_end] with `steps` classical RK4 steps.
// `on_step` (optional) sees every accepted node.
GeodesicEnd flow_geodesic(
    const ChartManifold& m, const Vec& x0, const Vec& u0, const Mat& carried,
    double t_end, int steps,
    const std::function<void(double, const Vec&, const Vec&, const Mat&)>&
        on_step = {});

Curve integrate_geodesic(const ChartManifold& m, const Vec& p,
                         const TangentVector& v, double t_end, int steps);

// exp_p(v): endpoint of the geodesic with initial velocity v at t = 1.
Vec exp_map(const ChartManifold& m, const Vec& p, const Vec& v, int steps);

TangentVector parallel_transport(const ChartManifold& m, const Curve& c,
                                 const TangentVector& v, int leg_steps = 64);

struct LogOptions {
  int steps = 64;
  int max_iter = 60;
};

TangentVector riemannian_log(const ChartManifold& m, const Vec& p,
                             const Vec& x, double tol,
                             const LogOptions& opts = {});

// Columns form a g_p-orthonormal basis (inverse transpose Cholesky factor).
Mat orthonormal_frame(const ChartManifold& m, const Vec& p);

// Maximum over the curve nodes of |speed - speed(0)| / speed(0).
double speed_drift(const ChartManifold& m, const Curve& c);

}  // namespace affgeo
