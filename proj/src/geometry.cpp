// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace affgeo {

namespace {

std::string describe(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

void require_domain(const ChartManifold& m, const Vec& x, const char* what) {
  if (x.size() != m.dim())
    throw ArgumentError(std::string(what) + ": dimension mismatch");
  if (!m.in_domain(x))
    throw DomainError(std::string(what) + ": coordinates " + describe(x) +
                      " outside the chart domain of " + m.name());
}

}  // namespace

bool Box::contains(const Vec& x) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  }
  return true;
}

double Box::scale() const { return (hi - lo).minCoeff(); }

Vec ChristoffelSymbols::contract(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(dim_);
  for (int k = 0; k < dim_; ++k) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < dim_; ++j) s += (*this)(k, i, j) * a[i] * b[j];
    }
    out[k] = s;
  }
  return out;
}

Mat ChristoffelSymbols::contract(const Vec& a, const Mat& b) const {
  // A^k_j = Gamma^k_{ij} a^i, then A * b.
  Mat contracted = Mat::Zero(dim_, dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) contracted(k, j) += (*this)(k, i, j) * a[i];
  return contracted * b;
}

ChartManifold::Ptr ChartManifold::analytic(std::string name, int dim,
                                           MetricFn metric,
                                           MetricDerivativeFn derivative,
                                           Box domain,
                                           double convexity_radius) {
  if (dim <= 0) throw ArgumentError("manifold dimension must be positive");
  if (domain.lo.size() != dim || domain.hi.size() != dim)
    throw ArgumentError("domain box dimension mismatch");
  auto m = std::shared_ptr<ChartManifold>(new ChartManifold());
  m->name_ = std::move(name);
  m->dim_ = dim;
  m->metric_ = std::move(metric);
  m->derivative_ = std::move(derivative);
  m->domain_ = std::move(domain);
  m->mode_ = ChristoffelMode::kAnalytic;
  m->convexity_radius_ = convexity_radius;
  return m;
}

ChartManifold::Ptr ChartManifold::finite_difference(std::string name, int dim,
                                                    MetricFn metric, Box domain,
                                                    double convexity_radius,
                                                    double h_fd) {
  if (dim <= 0) throw ArgumentError("manifold dimension must be positive");
  if (domain.lo.size() != dim || domain.hi.size() != dim)
    throw ArgumentError("domain box dimension mismatch");
  auto m = std::shared_ptr<ChartManifold>(new ChartManifold());
  m->name_ = std::move(name);
  m->dim_ = dim;
  m->metric_ = std::move(metric);
  m->domain_ = std::move(domain);
  m->mode_ = ChristoffelMode::kFiniteDifference;
  m->h_fd_ = h_fd > 0.0 ? h_fd : 1e-4 * m->domain_.scale();
  m->convexity_radius_ = convexity_radius;
  return m;
}

Mat ChartManifold::metric(const Vec& x) const { return metric_(x); }

std::vector<Mat> ChartManifold::metric_derivative(const Vec& x) const {
  if (mode_ == ChristoffelMode::kAnalytic) return derivative_(x);
  std::vector<Mat> dg;
  dg.reserve(static_cast<size_t>(dim_));
  for (int l = 0; l < dim_; ++l) {
    Vec xp = x, xm = x;
    xp[l] += h_fd_;
    xm[l] -= h_fd_;
    dg.push_back((metric_(xp) - metric_(xm)) / (2.0 * h_fd_));
  }
  return dg;
}

double ChartManifold::inner(const Vec& x, const Vec& a, const Vec& b) const {
  return a.dot(metric_(x) * b);
}

double ChartManifold::norm(const Vec& x, const Vec& v) const {
  return std::sqrt(std::max(0.0, inner(x, v, v)));
}

ChristoffelSymbols christoffel(const ChartManifold& m, const Vec& x) {
  require_domain(m, x, "christoffel");
  const int n = m.dim();
  const std::vector<Mat> dg = m.metric_derivative(x);
  const Mat ginv = m.metric(x).inverse();
  ChristoffelSymbols gamma(n);
  // Gamma^k_ij = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Vec lowered(n);
      for (int l = 0; l < n; ++l)
        lowered[l] = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
      const Vec raised = ginv * lowered;
      for (int k = 0; k < n; ++k) {
        gamma(k, i, j) = raised[k];
        gamma(k, j, i) = raised[k];
      }
    }
  }
  return gamma;
}

GeodesicEnd flow_geodesic(
    const ChartManifold& m, const Vec& x0, const Vec& u0, const Mat& carried,
    double t_end, int steps,
    const std::function<void(double, const Vec&, const Vec&, const Mat&)>&
        on_step) {
  require_domain(m, x0, "geodesic start");
  if (steps < 1) throw ArgumentError("geodesic integration needs steps >= 1");
  const int n = m.dim();
  const Mat w0 = carried.size() == 0 ? Mat(n, 0) : carried;
  if (u0.size() != n || w0.rows() != n)
    throw ArgumentError("geodesic integration: dimension mismatch");

  struct Rate {
    Vec dx, du;
    Mat dw;
  };
  double last_t = 0.0;
  auto rate = [&](const Vec& x, const Vec& u, const Mat& w) -> Rate {
    if (!m.in_domain(x))
      throw TruncationError("geodesic left the chart domain of " + m.name(),
                            last_t);
    const ChristoffelSymbols gamma = christoffel(m, x);
    return {u, -gamma.contract(u, u), -gamma.contract(u, w)};
  };

  const double h = t_end / steps;
  Vec x = x0, u = u0;
  Mat w = w0;
  if (on_step) on_step(0.0, x, u, w);
  for (int s = 0; s < steps; ++s) {
    const Rate k1 = rate(x, u, w);
    const Rate k2 = rate(x + 0.5 * h * k1.dx, u + 0.5 * h * k1.du,
                         w + 0.5 * h * k1.dw);
    const Rate k3 = rate(x + 0.5 * h * k2.dx, u + 0.5 * h * k2.du,
                         w + 0.5 * h * k2.dw);
    const Rate k4 = rate(x + h * k3.dx, u + h * k3.du, w + h * k3.dw);
    Vec xn = x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    if (!m.in_domain(xn))
      throw TruncationError("geodesic left the chart domain of " + m.name(),
                            last_t);
    u += h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
    w += h / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
    x = std::move(xn);
    last_t = (s + 1 == steps) ? t_end : (s + 1) * h;
    if (on_step) on_step(last_t, x, u, w);
  }
  return {x, u, w};
}

Curve integrate_geodesic(const ChartManifold& m, const Vec& p,
                         const TangentVector& v, double t_end, int steps) {
  if (steps < 16) throw ArgumentError("integrate_geodesic needs steps >= 16");
  if ((v.base - p).norm() > 1e-12 * std::max(1.0, p.norm()))
    throw ArgumentError("tangent vector is not based at the start point");
  Curve c;
  c.kind = CurveKind::kGeodesic;
  c.nodes.reserve(static_cast<size_t>(steps + 1));
  flow_geodesic(m, p, v.components, Mat(m.dim(), 0), t_end, steps,
                [&](double t, const Vec& x, const Vec& u, const Mat&) {
                  c.nodes.push_back({t, x, u});
                });
  return c;
}

Vec exp_map(const ChartManifold& m, const Vec& p, const Vec& v, int steps) {
  return flow_geodesic(m, p, v, Mat(m.dim(), 0), 1.0, steps).x;
}

namespace {

// Transport along the chart-linear interpolation of the nodes.
Vec transport_generic(const ChartManifold& m, const Curve& c, Vec w,
                      int substeps) {
  for (size_t i = 0; i + 1 < c.nodes.size(); ++i) {
    const Vec& a = c.nodes[i].x;
    const Vec& b = c.nodes[i + 1].x;
    const double dt = c.nodes[i + 1].t - c.nodes[i].t;
    const Vec xdot = (b - a) / dt;
    const double h = dt / substeps;
    auto rate = [&](double s, const Vec& wv) -> Vec {
      const Vec x = a + s * xdot;
      return -christoffel(m, x).contract(xdot, wv);
    };
    for (int k = 0; k < substeps; ++k) {
      const double s = k * h;
      const Vec k1 = rate(s, w);
      const Vec k2 = rate(s + 0.5 * h, w + 0.5 * h * k1);
      const Vec k3 = rate(s + 0.5 * h, w + 0.5 * h * k2);
      const Vec k4 = rate(s + h, w + h * k3);
      w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return w;
}

}  // namespace

TangentVector parallel_transport(const ChartManifold& m, const Curve& c,
                                 const TangentVector& v, int leg_steps) {
  if (c.nodes.size() < 2) throw ArgumentError("curve needs at least two nodes");
  const Vec& start = c.start();
  if (v.base.size() != start.size() ||
      (v.base - start).norm() > 1e-9 * std::max(1.0, start.norm()))
    throw ArgumentError("vector is not based at the curve start");
  if (v.components.size() != m.dim())
    throw ArgumentError("parallel_transport: dimension mismatch");

  switch (c.kind) {
    case CurveKind::kGeodesic: {
      const CurveNode& first = c.nodes.front();
      if (first.velocity.size() != m.dim())
        throw ArgumentError("geodesic curve without velocities");
      const double span = c.nodes.back().t - first.t;
      const int steps = static_cast<int>(c.nodes.size()) - 1;
      const GeodesicEnd end =
          flow_geodesic(m, first.x, first.velocity, v.components, span, steps);
      return {end.x, end.transported.col(0)};
    }
    case CurveKind::kPolygon: {
      Vec w = v.components;
      for (size_t i = 0; i + 1 < c.nodes.size(); ++i) {
        const Vec& a = c.nodes[i].x;
        const Vec& b = c.nodes[i + 1].x;
        const TangentVector leg = riemannian_log(m, a, b, 1e-12);
        w = flow_geodesic(m, a, leg.components, w, 1.0, leg_steps)
                .transported.col(0);
      }
      return {c.end(), w};
    }
    case CurveKind::kGeneric:
      return {c.end(), transport_generic(m, c, v.components, leg_steps)};
  }
  throw ArgumentError("unknown curve kind");
}

TangentVector riemannian_log(const ChartManifold& m, const Vec& p,
                             const Vec& x, double tol, const LogOptions& opts) {
  require_domain(m, p, "riemannian_log base");
  require_domain(m, x, "riemannian_log target");
  const int n = m.dim();
  if ((x - p).norm() == 0.0) return {p, Vec::Zero(n)};

  auto shoot = [&](const Vec& v, Vec& out) -> bool {
    try {
      out = exp_map(m, p, v, opts.steps);
      return true;
    } catch (const TruncationError&) {
      return false;
    }
  };

  Vec v = x - p;
  Vec y;
  if (!shoot(v, y)) {
    // Start inside the chart even when the straight chart step leaves it.
    v *= 0.5;
    if (!shoot(v, y))
      throw ConvergenceError("riemannian_log: initial shot left the chart",
                             (x - p).norm());
  }
  Vec residual = y - x;
  double rnorm = residual.norm();

  for (int it = 0; it < opts.max_iter && rnorm > tol; ++it) {
    Mat jac(n, n);
    const double delta = 1e-6 * std::max(1.0, v.norm());
    for (int j = 0; j < n; ++j) {
      Vec vp = v, vm = v, yp, ym;
      vp[j] += delta;
      vm[j] -= delta;
      if (!shoot(vp, yp) || !shoot(vm, ym))
        throw ConvergenceError("riemannian_log: Jacobian probe left the chart",
                               rnorm);
      jac.col(j) = (yp - ym) / (2.0 * delta);
    }
    const Vec step = jac.fullPivLu().solve(-residual);
    double damping = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const Vec trial = v + damping * step;
      Vec yt;
      if (shoot(trial, yt)) {
        const double rt = (yt - x).norm();
        if (rt < rnorm) {
          v = trial;
          residual = yt - x;
          rnorm = rt;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!accepted) break;
  }
  if (!(rnorm <= tol))
    throw ConvergenceError("riemannian_log: shooting did not converge", rnorm);
  return {p, v};
}

Mat orthonormal_frame(const ChartManifold& m, const Vec& p) {
  require_domain(m, p, "orthonormal_frame");
  const Mat g = m.metric(p);
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw DomainError("metric is not positive definite at " + describe(p));
  // g = L L^T  =>  F = L^{-T} satisfies F^T g F = I.
  const Mat l = llt.matrixL();
  return l.transpose().triangularView<Eigen::Upper>().solve(
      Mat::Identity(m.dim(), m.dim()));
}

double speed_drift(const ChartManifold& m, const Curve& c) {
  if (c.nodes.empty() || c.nodes.front().velocity.size() == 0) return 0.0;
  const double s0 = m.norm(c.nodes.front().x, c.nodes.front().velocity);
  double worst = 0.0;
  for (const CurveNode& node : c.nodes)
    worst = std::max(worst, std::abs(m.norm(node.x, node.velocity) - s0));
  return s0 > 0.0 ? worst / s0 : worst;
}

}  // namespace affgeo
