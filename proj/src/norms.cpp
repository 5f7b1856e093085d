// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/norms.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <fstream>
#include <random>

namespace affgeo {

namespace {

Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-8);
  return v.normalized();
}

// Gauss-Legendre nodes and weights on [a, b].
template <unsigned N>
std::vector<std::pair<double, double>> gauss_legendre(double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::vector<std::pair<double, double>> out;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      out.emplace_back(mid, half * w[i]);
      continue;
    }
    out.emplace_back(mid - half * x[i], half * w[i]);
    out.emplace_back(mid + half * x[i], half * w[i]);
  }
  return out;
}

void require_norm(const NormField& q, const char* what) {
  if (q.kind() == NormKind::kSeminorm)
    throw SeminormError(std::string(what) + " needs a norm, got a seminorm");
}

}  // namespace

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::kSeminorm:
      return "seminorm";
    case NormKind::kNorm:
      return "norm";
    case NormKind::kMinkowskiCandidate:
      return "minkowski_candidate";
  }
  return "unknown";
}

NormField::NormField(int dim, EvalFn eval, NormKind kind, int n_grid)
    : dim_(dim), eval_(std::move(eval)), kind_(kind), n_grid_(n_grid) {
  if (dim < 1) throw ArgumentError("norm dimension must be positive");
  grid_ = sphere_grid(dim, n_grid);
  values_.reserve(grid_->size());
  for (const Vec& u : *grid_) values_.push_back(eval_(u));
  if (kind_ != NormKind::kSeminorm && grid_min() <= 1e-12)
    add_warning("norm vanishes on the direction grid");
}

double NormField::grid_min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double NormField::grid_max() const {
  return *std::max_element(values_.begin(), values_.end());
}

NormField euclidean_norm(int dim, int n_grid) {
  return NormField(dim, [](const Vec& v) { return v.norm(); },
                   NormKind::kMinkowskiCandidate, n_grid);
}

NormField linf_norm(int dim, int n_grid) {
  return NormField(dim, [](const Vec& v) { return v.lpNorm<Eigen::Infinity>(); },
                   NormKind::kNorm, n_grid);
}

NormField l1_norm(int dim, int n_grid) {
  return NormField(dim, [](const Vec& v) { return v.lpNorm<1>(); },
                   NormKind::kNorm, n_grid);
}

NormField scaled(const NormField& q, double factor) {
  return NormField(q.dim(), [q, factor](const Vec& v) { return factor * q(v); },
                   q.kind(), q.n_grid());
}

double homogeneity_defect(const NormField& q, int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.1, 3.0);
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Vec v = radius(rng) * random_unit(rng, q.dim());
    const double base = q(v);
    for (double lambda : {-2.0, -1.0, 0.5, 3.0}) {
      const double defect = std::abs(q(lambda * v) - std::abs(lambda) * base);
      worst = std::max(worst, defect / std::max(std::abs(lambda) * base, 1e-300));
    }
  }
  return worst;
}

double convexity_defect(const NormField& q, int n_pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.1, 3.0);
  double worst = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const Vec u = radius(rng) * random_unit(rng, q.dim());
    const Vec v = radius(rng) * random_unit(rng, q.dim());
    worst = std::max(worst, q(0.5 * (u + v)) - 0.5 * (q(u) + q(v)));
  }
  return worst;
}

double norm_distance(const NormField& q1, const NormField& q2) {
  if (q1.dim() != q2.dim()) throw ArgumentError("norm_distance: dimension mismatch");
  const bool same_grid = q1.n_grid() == q2.n_grid();
  const auto& dirs = q1.directions();
  double worst = 0.0;
  for (size_t i = 0; i < dirs.size(); ++i) {
    const double a = q1.values()[i];
    const double b = same_grid ? q2.values()[i] : q2(dirs[i]);
    if (!(a > 0.0) || !(b > 0.0))
      throw SeminormError("norm_distance: a norm vanishes on the grid");
    worst = std::max(worst, std::abs(std::log(a / b)));
  }
  return worst;
}

double distance_to_euclidean(const NormField& q) {
  const double lo = q.grid_min(), hi = q.grid_max();
  if (!(lo > 0.0)) throw SeminormError("distance_to_euclidean: norm vanishes");
  return 0.5 * std::log(hi / lo);
}

NormField average_norm(const NormField& q, const HolonomySample& s) {
  if (s.elements.empty()) return q;
  if (s.dim() != q.dim()) throw ArgumentError("average_norm: dimension mismatch");
  auto elements = std::make_shared<const std::vector<Mat>>(s.elements);
  return NormField(
      q.dim(),
      [q, elements](const Vec& v) {
        double sum = 0.0;
        for (const Mat& a : *elements) sum += q(a * v);
        return sum / static_cast<double>(elements->size());
      },
      q.kind() == NormKind::kSeminorm ? NormKind::kSeminorm : NormKind::kNorm,
      q.n_grid());
}

double invariance_residual(const NormField& q, const HolonomySample& s) {
  if (s.dim() != q.dim())
    throw ArgumentError("invariance_residual: dimension mismatch");
  const auto& dirs = q.directions();
  double worst = 0.0;
  for (size_t i = 0; i < dirs.size(); ++i) {
    const double base = q.values()[i];
    for (const Mat& a : s.elements) {
      const double moved = q(a * dirs[i]);
      if (base <= 0.0 || moved <= 0.0) {
        if (base == moved) continue;
        throw SeminormError("invariance_residual: seminorm zero set is not invariant");
      }
      worst = std::max(worst, std::abs(std::log(moved / base)));
    }
  }
  return worst;
}

NormField orbit_hull_norm(const HolonomySample& s, const Vec& seed, int n_grid) {
  if (s.elements.empty()) throw ArgumentError("orbit_hull_norm: empty sample");
  if (seed.size() != s.dim()) throw ArgumentError("orbit_hull_norm: seed dimension");
  std::vector<Vec> orbit;
  orbit.reserve(s.elements.size());
  for (const Mat& a : s.elements) orbit.push_back(a * seed);
  auto gauge = std::make_shared<const PolytopeGauge>(orbit);
  const bool full = gauge->rank() == gauge->dim();
  NormField q(
      s.dim(), [gauge](const Vec& v) { return (*gauge)(v); },
      full ? NormKind::kNorm : NormKind::kSeminorm, n_grid);
  if (!full)
    q.add_warning("orbit hull spans only " + std::to_string(gauge->rank()) +
                  " of " + std::to_string(gauge->dim()) + " dimensions");
  return q;
}

NormField block_sum_norm(const SplittingReport& split,
                         const std::vector<NormField>& block_norms, int n_grid) {
  if (split.subspace_bases.size() != block_norms.size())
    throw ArgumentError("block_sum_norm: one norm per block required");
  if (block_norms.empty()) throw ArgumentError("block_sum_norm: no blocks");
  const int dim = static_cast<int>(split.subspace_bases.front().rows());
  bool seminorm = false;
  for (size_t i = 0; i < block_norms.size(); ++i) {
    if (split.subspace_bases[i].rows() != dim ||
        split.subspace_bases[i].cols() != block_norms[i].dim())
      throw ArgumentError("block_sum_norm: block dimension mismatch");
    seminorm = seminorm || block_norms[i].kind() == NormKind::kSeminorm;
  }
  if (block_norms.size() == 1 && split.subspace_bases.front().cols() == dim &&
      split.subspace_bases.front().isIdentity(1e-14))
    return block_norms.front();
  auto bases = std::make_shared<const std::vector<Mat>>(split.subspace_bases);
  auto norms = std::make_shared<const std::vector<NormField>>(block_norms);
  return NormField(
      dim,
      [bases, norms](const Vec& v) {
        double sum = 0.0;
        for (size_t i = 0; i < bases->size(); ++i)
          sum += (*norms)[i]((*bases)[i].transpose() * v);
        return sum;
      },
      seminorm ? NormKind::kSeminorm : NormKind::kNorm, n_grid);
}

namespace {

// Quadrature for the cap average. The cap measure is the push-forward of a
// rotation by angle rho in a uniformly random 2-plane, rho weighted by the
// bump (1 - (rho/eps)^2)^2, so the average is a mixture of rotated copies of
// q and stays convex.
struct CapRule {
  std::vector<std::pair<double, double>> angle_weight;  // (alpha, weight)
  std::vector<Vec> fibre;                               // unit vectors in R^{d-1}
};

CapRule make_cap_rule(int dim, double eps) {
  CapRule rule;
  const auto rho_nodes = dim == 2 ? gauss_legendre<48>(0.0, eps)
                                  : gauss_legendre<6>(0.0, eps);
  std::vector<std::pair<double, double>> rho;
  double total = 0.0;
  for (const auto& [r, w] : rho_nodes) {
    const double x = r / eps;
    const double weight = w * (1.0 - x * x) * (1.0 - x * x);
    rho.emplace_back(r, weight);
    total += weight;
  }
  for (auto& [r, w] : rho) w /= total;

  if (dim == 2) {
    rule.angle_weight = rho;
    rule.fibre = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
    return rule;
  }
  // Fraction c of the direction inside the random plane ~ Beta(1, (d-2)/2).
  const double b = 0.5 * (dim - 2);
  for (const auto& [r, wr] : rho) {
    for (const auto& [u, wu] : gauss_legendre<4>(0.0, 1.0)) {
      const double c = 1.0 - std::pow(1.0 - u, 1.0 / b);
      const double alpha = std::acos(std::clamp(1.0 - c * (1.0 - std::cos(r)), -1.0, 1.0));
      rule.angle_weight.emplace_back(alpha, wr * wu);
    }
  }
  rule.fibre = dim == 3 ? *sphere_grid(2, 16) : *sphere_grid(dim - 1, 45);
  return rule;
}

// Orthonormal basis of the complement of the unit vector u (Householder).
Mat complement_basis(const Vec& u) {
  const int n = static_cast<int>(u.size());
  Vec w = u;
  w[0] += (u[0] >= 0.0 ? 1.0 : -1.0);
  const Mat h = Mat::Identity(n, n) - 2.0 * w * w.transpose() / w.squaredNorm();
  return h.rightCols(n - 1);
}

}  // namespace

SmoothedNorm minkowski_smooth(const NormField& q, double eps) {
  require_norm(q, "minkowski_smooth");
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("minkowski_smooth needs eps in (0, 1)");
  const int dim = q.dim();
  if (dim == 1) {
    NormField same(1, [q](const Vec& v) { return q(v); }, NormKind::kMinkowskiCandidate, q.n_grid());
    return {same, 0.0, 0.0};
  }
  auto rule = std::make_shared<const CapRule>(make_cap_rule(dim, eps));
  auto mollified = [q, rule, dim](const Vec& v) {
    const double r = v.norm();
    if (r == 0.0) return 0.0;
    const Vec u = v / r;
    const Mat perp = dim == 2 ? Mat((Mat(2, 1) << -u[1], u[0]).finished())
                              : complement_basis(u);
    const double fibre_weight = 1.0 / static_cast<double>(rule->fibre.size());
    double sum = 0.0;
    for (const auto& [alpha, w] : rule->angle_weight) {
      const double ca = std::cos(alpha), sa = std::sin(alpha);
      double ring = 0.0;
      for (const Vec& f : rule->fibre) ring += q(ca * u + sa * (perp * f));
      sum += w * ring * fibre_weight;
    }
    return r * sum;
  };
  NormField out(
      dim,
      [mollified, eps](const Vec& v) {
        const double m = mollified(v);
        return std::sqrt((1.0 - eps) * m * m + eps * v.squaredNorm());
      },
      NormKind::kMinkowskiCandidate, q.n_grid());
  const double distance = norm_distance(out, q);
  return {out, distance, distance / eps};
}

MinkowskiReport minkowski_check(const NormField& q, int n_probe, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> probes;
  for (int i = 0; i < n_probe; ++i) probes.push_back(random_unit(rng, q.dim()));
  return minkowski_check(q, probes);
}

MinkowskiReport minkowski_check(const NormField& q, const std::vector<Vec>& probes) {
  require_norm(q, "minkowski_check");
  const int n = q.dim();
  auto energy = [&q](const Vec& v) {
    const double value = q(v);
    return 0.5 * value * value;
  };
  auto hessian = [&](const Vec& x, double h) {
    Mat hess(n, n);
    const double f0 = energy(x);
    for (int i = 0; i < n; ++i) {
      const Vec ei = Vec::Unit(n, i) * h;
      hess(i, i) = (energy(x + ei) - 2.0 * f0 + energy(x - ei)) / (h * h);
      for (int j = 0; j < i; ++j) {
        const Vec ej = Vec::Unit(n, j) * h;
        const double mixed = (energy(x + ei + ej) - energy(x + ei - ej) -
                              energy(x - ei + ej) + energy(x - ei - ej)) /
                             (4.0 * h * h);
        hess(i, j) = hess(j, i) = mixed;
      }
    }
    return hess;
  };
  MinkowskiReport report;
  report.hessian_min_eigen = std::numeric_limits<double>::infinity();
  for (const Vec& p : probes) {
    const Vec x = p.normalized();
    const Mat coarse = hessian(x, 1e-2);
    const Mat fine = hessian(x, 5e-3);
    const double scale = std::max(1.0, fine.norm());
    report.smooth_residual = std::max(report.smooth_residual, (coarse - fine).norm() / scale);
    Eigen::SelfAdjointEigenSolver<Mat> eig(fine);
    report.hessian_min_eigen = std::min(report.hessian_min_eigen, eig.eigenvalues()[0]);
  }
  if (probes.empty()) report.hessian_min_eigen = 0.0;
  report.minkowski = !probes.empty() && report.hessian_min_eigen > 0.0 &&
                     report.smooth_residual <= 0.05;
  return report;
}

NormField restrict_norm_to_section(const NormField& q, const Mat& section_basis,
                                   int n_grid) {
  if (section_basis.rows() != q.dim())
    throw ArgumentError("restrict_norm_to_section: basis has the wrong ambient dimension");
  const Mat gram = section_basis.transpose() * section_basis;
  if (!gram.isIdentity(1e-9))
    throw ArgumentError("restrict_norm_to_section: section basis is not orthonormal");
  return NormField(
      static_cast<int>(section_basis.cols()),
      [q, section_basis](const Vec& x) { return q(section_basis * x); }, q.kind(),
      n_grid);
}

void export_grid_csv(const NormField& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (int i = 0; i < q.dim(); ++i) out << "u" << i << ",";
  out << "value\n";
  out.precision(17);
  for (size_t k = 0; k < q.directions().size(); ++k) {
    const Vec& u = q.directions()[k];
    for (int i = 0; i < q.dim(); ++i) out << u[i] << ",";
    out << q.values()[k] << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace affgeo
