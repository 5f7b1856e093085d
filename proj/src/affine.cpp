// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/affine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace affgeo {

namespace {

Vec uniform_point(std::mt19937_64& rng, const Box& region) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec x(region.lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = region.lo[i] + unit(rng) * (region.hi[i] - region.lo[i]);
  return x;
}

Vec unit_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

double relative(double a, double b) {
  const double scale = std::max(std::abs(b), 1e-12);
  return std::abs(a - b) / scale;
}

// Orthonormal basis of the column span, via Householder QR.
Mat orthonormalize(const Mat& a) {
  if (a.cols() == 0) return a;
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ() * Mat::Identity(a.rows(), a.cols());
}

// Minimizer of a convex function on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, int iters) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

// Rough nearest-neighbour spacing of sphere_grid(dim, n_grid).
double grid_spacing(int dim, size_t n_points) {
  if (dim <= 1) return std::numbers::pi;
  const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) /
                      std::tgamma(0.5 * dim);
  return 1.5 * std::pow(area / static_cast<double>(n_points), 1.0 / (dim - 1));
}

}  // namespace

OracleDefects oracle_metric_defects(const MapOracle& o, const Box& region,
                                    int n_triples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OracleDefects out;
  for (int i = 0; i < n_triples; ++i) {
    const PointLabel a = o.point_map(uniform_point(rng, region));
    const PointLabel b = o.point_map(uniform_point(rng, region));
    const PointLabel c = o.point_map(uniform_point(rng, region));
    const double ab = o.distance(a, b), ba = o.distance(b, a);
    out.symmetry = std::max(out.symmetry, std::abs(ab - ba));
    out.triangle =
        std::max(out.triangle, o.distance(a, c) - ab - o.distance(b, c));
    out.self_distance = std::max(out.self_distance, std::abs(o.distance(a, a)));
  }
  out.triangle = std::max(out.triangle, 0.0);
  return out;
}

std::vector<double> default_t_list(const ChartManifold& m) {
  const double s = 0.1 * m.convexity_radius();
  std::vector<double> t;
  for (int k = 0; k <= 6; ++k) t.push_back(s * std::ldexp(1.0, -k));
  return t;
}

MetricDifferential metric_differential(const MapOracle& o, const TangentVector& v,
                                       const DifferentialOptions& opts) {
  const ChartManifold& m = *o.source;
  if (!m.in_domain(v.base))
    throw DomainError("metric_differential: base point outside the chart");
  if (v.components.size() != m.dim())
    throw ArgumentError("metric_differential: dimension mismatch");
  const std::vector<double> t_list =
      opts.t_list.empty() ? default_t_list(m) : opts.t_list;

  const PointLabel y0 = o.point_map(v.base);
  MetricDifferential out;
  std::vector<double> d;
  for (double t : t_list) {
    try {
      const Vec x = exp_map(m, v.base, t * v.components, opts.steps);
      if (!m.in_domain(x)) continue;
      d.push_back(o.distance(y0, o.point_map(x)));
      out.t_used.push_back(t);
    } catch (const TruncationError&) {
    } catch (const DomainError&) {
    }
  }
  if (out.t_used.size() < 3)
    throw SamplingError("metric_differential: fewer than 3 usable t values");

  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < d.size(); ++i) {
    num += out.t_used[i] * d[i];
    den += out.t_used[i] * out.t_used[i];
  }
  out.value = num / den;
  for (size_t i = 0; i < d.size(); ++i)
    out.residual = std::max(out.residual, std::abs(d[i] / out.t_used[i] - out.value));
  return out;
}

NormField differential_norm(const MapOracle& o, const Vec& p, int n_grid,
                            const DifferentialOptions& opts) {
  const Mat frame = orthonormal_frame(*o.source, p);
  const MapOracle oracle = o;
  return NormField(
      o.source->dim(),
      [oracle, frame, p, opts](const Vec& u) {
        return metric_differential(oracle, {p, frame * u}, opts).value;
      },
      NormKind::kSeminorm, n_grid);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kAffine:
      return "affine";
    case Verdict::kNotAffine:
      return "not_affine";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

void classify(AffinityReport& r, const VerdictThresholds& th) {
  const double residuals[] = {r.linearity_residual, r.seminorm_residual,
                              r.parallel_residual};
  bool any = false, all_small = true, any_large = false;
  for (double x : residuals) {
    if (std::isnan(x)) continue;
    any = true;
    if (!(x <= th.affine)) all_small = false;
    if (x >= th.not_affine) any_large = true;
  }
  if (!any)
    r.verdict = Verdict::kInconclusive;
  else if (any_large)
    r.verdict = Verdict::kNotAffine;
  else if (all_small)
    r.verdict = Verdict::kAffine;
  else
    r.verdict = Verdict::kInconclusive;
}

AffinityReport affinity_test(const MapOracle& o, const Box& region,
                             int n_geodesics, std::uint64_t seed,
                             const AffinityOptions& opts) {
  const ChartManifold& m = *o.source;
  if (n_geodesics < 1) throw ArgumentError("affinity_test needs n_geodesics >= 1");
  const int k = std::max(2, opts.subdivisions + opts.subdivisions % 2);
  const int per = std::max(1, (opts.steps + k - 1) / k);
  const int steps = per * k;
  const double length =
      opts.segment_length > 0.0 ? opts.segment_length : 0.5 * m.convexity_radius();

  AffinityReport report;
  report.seed = seed;
  report.segment_length = length;
  report.linearity_residual = 0.0;
  std::mt19937_64 rng(seed);

  for (int g = 0; g < n_geodesics; ++g) {
    const Vec p = uniform_point(rng, region);
    const Vec u = unit_vector(rng, m.dim());
    if (!m.in_domain(p)) {
      ++report.skipped;
      continue;
    }
    std::vector<Vec> nodes;
    try {
      const Vec dir = orthonormal_frame(m, p) * u;
      int count = 0;
      flow_geodesic(m, p, dir, Mat(m.dim(), 0), length, steps,
                    [&](double, const Vec& x, const Vec&, const Mat&) {
                      if (count++ % per == 0) nodes.push_back(x);
                    });
    } catch (const TruncationError&) {
      ++report.skipped;
      continue;
    }
    std::vector<PointLabel> y;
    y.reserve(nodes.size());
    for (const Vec& x : nodes) y.push_back(o.point_map(x));

    const size_t last = y.size() - 1, mid = last / 2;
    const double span = o.distance(y.front(), y.back());
    double widest = 0.0;
    for (size_t i = 0; i < y.size(); ++i)
      for (size_t j = i + 1; j < y.size(); ++j)
        widest = std::max(widest, o.distance(y[i], y[j]));
    ++report.n_segments;
    if (widest <= 1e-14) {
      report.segment_constants.push_back(0.0);
      continue;
    }
    const double scale = std::max(span, 1e-300);
    const double c = span / length;
    report.segment_constants.push_back(c);

    const double xm = o.distance(y.front(), y[mid]);
    const double mz = o.distance(y[mid], y.back());
    double res = std::max(std::abs(xm - mz), std::abs(span - xm - mz)) / scale;
    const double h = length / static_cast<double>(last);
    for (size_t i = 0; i < y.size(); ++i)
      for (size_t j = i + 1; j < y.size(); ++j)
        res = std::max(res, std::abs(o.distance(y[i], y[j]) -
                                     static_cast<double>(j - i) * h * c) /
                                scale);
    report.linearity_residual = std::max(report.linearity_residual, res);
  }
  if (report.n_segments == 0)
    throw SamplingError("affinity_test: every segment left the chart");
  classify(report);
  return report;
}

double seminorm_check(const MapOracle& o, const Vec& p, int n_pairs,
                      std::uint64_t seed, const DifferentialOptions& opts) {
  const ChartManifold& m = *o.source;
  const Mat frame = orthonormal_frame(m, p);
  std::mt19937_64 rng(seed);
  const double lambdas[] = {-2.0, 0.5, 3.0};
  auto md = [&](const Vec& chart) {
    return metric_differential(o, {p, chart}, opts).value;
  };
  double worst = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const Vec u = frame * unit_vector(rng, m.dim());
    const Vec v = frame * unit_vector(rng, m.dim());
    const double fu = md(u), fv = md(v);
    worst = std::max(worst, md(u + v) - fu - fv);
    const double lambda = lambdas[i % 3];
    worst = std::max(worst, std::abs(md(lambda * u) - std::abs(lambda) * fu));
  }
  return std::max(worst, 0.0);
}

ParallelProfile parallel_invariance_check(const MapOracle& o, const Curve& gamma,
                                          const TangentVector& v, int n_t,
                                          const DifferentialOptions& opts) {
  const ChartManifold& m = *o.source;
  if (gamma.kind != CurveKind::kGeodesic || gamma.nodes.size() < 2 ||
      gamma.nodes.front().velocity.size() != m.dim())
    throw ArgumentError("parallel_invariance_check needs a geodesic curve");
  if ((v.base - gamma.start()).norm() > 1e-9 * std::max(1.0, v.base.norm()))
    throw ArgumentError("vector is not based at the curve start");
  if (n_t < 1) throw ArgumentError("parallel_invariance_check needs n_t >= 1");

  const int steps = static_cast<int>(gamma.nodes.size()) - 1;
  std::vector<int> wanted;
  for (int k = 0; k <= n_t; ++k)
    wanted.push_back(static_cast<int>(std::lround(static_cast<double>(k) * steps / n_t)));

  std::vector<std::pair<double, TangentVector>> samples;
  int index = 0;
  size_t next = 0;
  flow_geodesic(m, gamma.start(), gamma.nodes.front().velocity, v.components,
                gamma.nodes.back().t - gamma.nodes.front().t, steps,
                [&](double t, const Vec& x, const Vec&, const Mat& w) {
                  while (next < wanted.size() && wanted[next] == index) {
                    samples.push_back({t, {x, w.col(0)}});
                    ++next;
                  }
                  ++index;
                });

  ParallelProfile out;
  for (const auto& [t, tv] : samples) {
    out.t.push_back(t);
    out.values.push_back(metric_differential(o, tv, opts).value);
  }
  const double f0 = out.values.front();
  for (double f : out.values) {
    const double dev = std::abs(f - f0);
    out.residual = std::max(out.residual, f0 > 1e-12 ? dev / f0 : dev);
  }
  return out;
}

double parallel_invariance_suite(const MapOracle& o, const Box& region,
                                 int n_geodesics, int n_t, double length,
                                 std::uint64_t seed, int steps,
                                 const DifferentialOptions& opts) {
  const ChartManifold& m = *o.source;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int done = 0, attempts = 0;
  while (done < n_geodesics) {
    if (++attempts > 20 * n_geodesics)
      throw SamplingError("parallel_invariance_suite: geodesics keep leaving the chart");
    const Vec p = uniform_point(rng, region);
    const Vec u = unit_vector(rng, m.dim());
    const Vec w = unit_vector(rng, m.dim());
    if (!m.in_domain(p)) continue;
    try {
      const Mat frame = orthonormal_frame(m, p);
      const Curve gamma = integrate_geodesic(m, p, {p, frame * u}, length, steps);
      worst = std::max(
          worst, parallel_invariance_check(o, gamma, {p, frame * w}, n_t, opts).residual);
      ++done;
    } catch (const TruncationError&) {
    } catch (const SamplingError&) {
    }
  }
  return worst;
}

RegularityEstimate regular_vector_test(const MapOracle& o, const TangentVector& h,
                                       const TangentVector& v,
                                       const std::vector<double>& t_list,
                                       double tol, const DifferentialOptions& opts) {
  if ((h.base - v.base).norm() > 1e-12 * std::max(1.0, h.base.norm()))
    throw ArgumentError("regular_vector_test: h and v have different base points");
  if (t_list.size() < 2) throw ArgumentError("regular_vector_test needs two t values");
  auto md = [&](const Vec& c) {
    return metric_differential(o, {h.base, c}, opts).value;
  };
  const double fh = md(h.components);
  if (!(fh > 0.0)) throw ArgumentError("regular_vector_test needs |h|^f > 0");

  RegularityEstimate out;
  for (double t : t_list) {
    const double q =
        (md(h.components + t * v.components) + md(h.components - t * v.components) -
         2.0 * fh) /
        t;
    out.t.push_back(t);
    out.quotients.push_back(q);
  }
  // Least-squares polynomial in t (quadratic from four samples on); the
  // constant term is the limit.
  const int degree = out.t.size() >= 4 ? 2 : 1;
  Mat design(static_cast<Eigen::Index>(out.t.size()), degree + 1);
  Vec rhs(design.rows());
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    const double ti = out.t[static_cast<size_t>(i)];
    for (int k = 0; k <= degree; ++k) design(i, k) = std::pow(ti, k);
    rhs[i] = out.quotients[static_cast<size_t>(i)];
  }
  out.limit = design.colPivHouseholderQr().solve(rhs)[0];
  out.regular = std::abs(out.limit) <= tol;
  return out;
}

std::vector<MainLemmaPoint> mainlemma_check(const ChartManifold& m, const Vec& p,
                                            const TangentVector& gamma_dir,
                                            const TangentVector& h,
                                            const std::vector<double>& r_list,
                                            const MainLemmaOptions& opts) {
  if ((gamma_dir.base - p).norm() > 1e-12 * std::max(1.0, p.norm()) ||
      (h.base - p).norm() > 1e-12 * std::max(1.0, p.norm()))
    throw ArgumentError("mainlemma_check: vectors must be based at p");
  const LogOptions log_opts{opts.steps, 60};
  std::vector<MainLemmaPoint> out;
  for (double r : r_list) {
    MainLemmaPoint pt;
    pt.r = r;
    pt.dt = opts.dt_factor * r * r;
    try {
      Mat carried(m.dim(), 1);
      carried.col(0) = h.components;
      const GeodesicEnd moved =
          flow_geodesic(m, p, gamma_dir.components, carried, pt.dt, opts.steps);
      auto mu = [&](const Vec& base, const Vec& dir, double sign) {
        const Vec x = exp_map(m, base, sign * r * dir, opts.steps);
        return riemannian_log(m, p, x, opts.log_tol, log_opts).components;
      };
      const Vec v_plus =
          (mu(moved.x, moved.transported.col(0), 1.0) - mu(p, h.components, 1.0)) / pt.dt;
      const Vec v_minus =
          (mu(moved.x, moved.transported.col(0), -1.0) - mu(p, h.components, -1.0)) /
          pt.dt;
      pt.ratio = m.norm(p, v_plus - v_minus) / r;
      pt.converged = true;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

KernelReport kernel_distribution(const MapOracle& o, const Vec& p, int n_grid,
                                 double eps_rel, const DifferentialOptions& opts) {
  const ChartManifold& m = *o.source;
  const int d = m.dim();
  const Mat frame = orthonormal_frame(m, p);
  auto f = [&](const Vec& u) {
    return metric_differential(o, {p, frame * u}, opts).value;
  };
  const auto grid = sphere_grid(d, n_grid);
  std::vector<double> values;
  values.reserve(grid->size());
  for (const Vec& u : *grid) values.push_back(f(u));

  KernelReport out;
  out.max_value = *std::max_element(values.begin(), values.end());
  out.threshold = eps_rel * out.max_value;
  if (out.max_value <= 1e-14) {
    out.basis_frame = Mat::Identity(d, d);
    out.basis_chart = frame;
    out.dim = d;
    return out;
  }

  const double band =
      std::max(eps_rel, grid_spacing(d, grid->size())) * out.max_value;
  Mat scatter = Mat::Zero(d, d);
  int candidates = 0;
  for (size_t i = 0; i < grid->size(); ++i) {
    if (values[i] <= band) {
      scatter += (*grid)[i] * (*grid)[i].transpose();
      ++candidates;
    }
  }
  out.basis_frame = Mat(d, 0);
  if (candidates > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(scatter);
    const Vec& lambda = eig.eigenvalues();
    const double top = lambda[d - 1];
    std::vector<Vec> chosen;
    for (int i = d - 1; i >= 0 && lambda[i] >= 0.2 * top; --i)
      chosen.push_back(eig.eigenvectors().col(i));
    const int k = static_cast<int>(chosen.size());

    Mat span(d, k);
    for (int j = 0; j < k; ++j) span.col(j) = chosen[static_cast<size_t>(j)];
    Mat complement = Mat(d, 0);
    if (k < d) {
      Eigen::HouseholderQR<Mat> qr(span);
      const Mat q = qr.householderQ();
      complement = q.rightCols(d - k);
    }

    // Candidate directions only approximate the zero set; pull each one onto
    // it along the complement, where |.|^f is convex in the offset.
    std::vector<Vec> refined;
    for (Vec b : chosen) {
      if (f(b) > 1e-14 * out.max_value) {
        for (int sweep = 0; sweep < 3; ++sweep) {
          for (Eigen::Index c = 0; c < complement.cols(); ++c) {
            const Vec w = complement.col(c);
            const double s = golden_section(
                [&](double x) { return f(b + x * w); }, -0.3, 0.3, 60);
            b += s * w;
          }
        }
      }
      b.normalize();
      if (f(b) <= out.threshold) refined.push_back(b);
    }
    Mat raw(d, static_cast<Eigen::Index>(refined.size()));
    for (size_t j = 0; j < refined.size(); ++j)
      raw.col(static_cast<Eigen::Index>(j)) = refined[j];
    out.basis_frame = orthonormalize(raw);
  }
  out.dim = static_cast<int>(out.basis_frame.cols());
  out.basis_chart = frame * out.basis_frame;
  return out;
}

double max_principal_angle(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) return std::numbers::pi / 2.0;
  if (a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a.transpose() * b);
  const double smin = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smin, -1.0, 1.0));
}

double kernel_parallelism(const MapOracle& o, const Curve& gamma, int n_t,
                          int n_grid, double eps_rel,
                          const DifferentialOptions& opts) {
  const ChartManifold& m = *o.source;
  if (gamma.kind != CurveKind::kGeodesic || gamma.nodes.size() < 2 ||
      gamma.nodes.front().velocity.size() != m.dim())
    throw ArgumentError("kernel_parallelism needs a geodesic curve");
  const KernelReport k0 = kernel_distribution(o, gamma.start(), n_grid, eps_rel, opts);
  const int steps = static_cast<int>(gamma.nodes.size()) - 1;
  std::vector<int> wanted;
  for (int k = 1; k <= n_t; ++k)
    wanted.push_back(static_cast<int>(std::lround(static_cast<double>(k) * steps / n_t)));

  std::vector<std::pair<Vec, Mat>> samples;
  int index = 0;
  size_t next = 0;
  flow_geodesic(m, gamma.start(), gamma.nodes.front().velocity, k0.basis_chart,
                gamma.nodes.back().t - gamma.nodes.front().t, steps,
                [&](double, const Vec& x, const Vec&, const Mat& w) {
                  while (next < wanted.size() && wanted[next] == index) {
                    samples.push_back({x, w});
                    ++next;
                  }
                  ++index;
                });

  double worst = 0.0;
  for (const auto& [x, w] : samples) {
    const KernelReport kt = kernel_distribution(o, x, n_grid, eps_rel, opts);
    const Mat frame = orthonormal_frame(m, x);
    const Mat moved = orthonormalize(frame.partialPivLu().solve(w));
    worst = std::max(worst, max_principal_angle(moved, kt.basis_frame));
  }
  return worst;
}

DecompositionReport verify_decomposition(const MapOracle& o, const Box& region,
                                         const DeclaredDecomposition& declared,
                                         const DecompositionOptions& opts) {
  const ChartManifold& m = *o.source;
  const ChartManifold& quotient = *declared.quotient;
  std::mt19937_64 rng(opts.seed);
  DecompositionReport report;

  double angle = 0.0, invariance = 0.0, embedding = 0.0, composite = 0.0;
  std::vector<Vec> points;
  for (int i = 0; i < opts.n_points; ++i) points.push_back(uniform_point(rng, region));

  for (const Vec& p : points) {
    const KernelReport ko = kernel_distribution(o, p, opts.kernel_grid);
    const KernelReport kp = kernel_distribution(declared.projection, p, opts.kernel_grid);
    angle = std::max(angle, max_principal_angle(ko.basis_frame, kp.basis_frame));
  }

  const double qr = quotient.convexity_radius();
  for (size_t i = 0; i < points.size(); ++i) {
    const Vec q = declared.projection.point_map(points[i]);
    const HolonomySample s = sample_holonomy(quotient, q, 4, 0.3 * qr, opts.seed + i);
    invariance = std::max(invariance, invariance_residual(declared.finsler(q), s));
  }

  std::uniform_real_distribution<double> length(0.2, 1.0);
  for (int i = 0; i < opts.n_pairs; ++i) {
    const Vec& p = points[static_cast<size_t>(i) % points.size()];
    const Vec x = declared.projection.point_map(p);
    const Vec u = unit_vector(rng, quotient.dim());
    const double s = 0.1 * qr * length(rng);
    const Vec z = exp_map(quotient, x, s * (orthonormal_frame(quotient, x) * u), 64);
    const double expect = s * declared.finsler(x)(u);
    embedding = std::max(
        embedding, relative(declared.embedding.image_distance(x, z), expect));
  }

  for (int i = 0; i < opts.n_pairs; ++i) {
    const Vec& x = points[static_cast<size_t>(i) % points.size()];
    const Vec u = unit_vector(rng, m.dim());
    const double s = 0.2 * m.convexity_radius() * length(rng);
    const Vec z = exp_map(m, x, s * (orthonormal_frame(m, x) * u), 64);
    const double direct = o.image_distance(x, z);
    const double composed = declared.embedding.image_distance(
        declared.projection.point_map(x), declared.projection.point_map(z));
    composite = std::max(composite, std::abs(direct - composed) / std::max(1.0, direct));
  }

  report.checks = {
      {"a_projection_fibers", angle, opts.angle_tolerance,
       angle <= opts.angle_tolerance},
      {"b_finsler_invariance", invariance, opts.tolerance, invariance <= opts.tolerance},
      {"c_embedding_isometry", embedding, opts.tolerance, embedding <= opts.tolerance},
      {"d_composite_distances", composite, opts.tolerance, composite <= opts.tolerance},
  };
  report.passed = true;
  for (const FactorCheck& c : report.checks) {
    if (!c.passed) {
      report.passed = false;
      report.failures.push_back(c.name + ": " + std::to_string(c.value) +
                                " exceeds " + std::to_string(c.tolerance));
    }
  }
  return report;
}

}  // namespace affgeo
