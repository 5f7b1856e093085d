// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

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

// Transports the columns of `w` along the geodesic from a to b.
Mat transport_leg(const ChartManifold& m, const Vec& a, const Vec& b,
                  const Mat& w, const SamplingOptions& opts) {
  const TangentVector leg =
      riemannian_log(m, a, b, opts.log_tol, {opts.steps, 60});
  return flow_geodesic(m, a, leg.components, w, 1.0, opts.steps).transported;
}

// Spatial hash over two fixed projections of the flattened matrix; a pair
// within `tol` in Frobenius norm lands in adjacent cells.
class MatrixSet {
 public:
  MatrixSet(int dim, double tol) : tol_(tol) {
    std::mt19937_64 rng(0x5eedULL);
    p1_ = random_unit(rng, dim * dim);
    p2_ = random_unit(rng, dim * dim);
  }

  bool insert(const Mat& a) {
    const auto [i, j] = cell(a);
    for (long di = -1; di <= 1; ++di)
      for (long dj = -1; dj <= 1; ++dj) {
        auto it = buckets_.find(key(i + di, j + dj));
        if (it == buckets_.end()) continue;
        for (size_t idx : it->second)
          if ((items_[idx] - a).norm() <= tol_) return false;
      }
    buckets_[key(i, j)].push_back(items_.size());
    items_.push_back(a);
    return true;
  }

  const std::vector<Mat>& items() const { return items_; }
  size_t size() const { return items_.size(); }

 private:
  std::pair<long, long> cell(const Mat& a) const {
    const Eigen::Map<const Vec> flat(a.data(), a.size());
    return {static_cast<long>(std::floor(flat.dot(p1_) / tol_)),
            static_cast<long>(std::floor(flat.dot(p2_) / tol_))};
  }
  static std::uint64_t key(long i, long j) {
    return (static_cast<std::uint64_t>(i) << 32) ^
           (static_cast<std::uint64_t>(j) & 0xffffffffULL);
  }

  double tol_;
  Vec p1_, p2_;
  std::vector<Mat> items_;
  std::unordered_map<std::uint64_t, std::vector<size_t>> buckets_;
};

// Orthonormal basis of the eigenvectors of the symmetric matrix `s` whose
// eigenvalues lie below `cut`.
Mat low_eigenspace(const Mat& s, double cut) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(s);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    if (eig.eigenvalues()[i] <= cut) keep.push_back(i);
  Mat basis(s.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k)
    basis.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(keep[k]);
  return basis;
}

Mat orthogonal_complement(const Mat& basis, int dim) {
  if (basis.cols() == 0) return Mat::Identity(dim, dim);
  const Mat proj = Mat::Identity(dim, dim) - basis * basis.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(proj);
  Mat out(dim, dim - basis.cols());
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (eig.eigenvalues()[i] > 0.5) out.col(c++) = eig.eigenvectors().col(i);
  return out.leftCols(c);
}

}  // namespace

double HolonomySample::orthogonality_residual() const {
  double worst = 0.0;
  for (const Mat& a : elements) {
    const Mat id = Mat::Identity(a.rows(), a.cols());
    worst = std::max(worst, (a.transpose() * a - id).norm());
  }
  return worst;
}

Mat triangle_holonomy(const ChartManifold& m, const Vec& p, const Vec& q1,
                      const Vec& q2, const Mat& frame,
                      const SamplingOptions& opts) {
  Mat w = transport_leg(m, p, q1, frame, opts);
  w = transport_leg(m, q1, q2, w, opts);
  w = transport_leg(m, q2, p, w, opts);
  // A_ij = g(F_i, P F_j)
  return frame.transpose() * m.metric(p) * w;
}

HolonomySample sample_holonomy(const ChartManifold& m, const Vec& p,
                               int n_loops, double scale, std::uint64_t seed,
                               const SamplingOptions& opts) {
  if (n_loops < 1) throw ArgumentError("sample_holonomy needs n_loops >= 1");
  if (!(scale > 0.0)) throw ArgumentError("sample_holonomy needs scale > 0");
  const int n = m.dim();
  HolonomySample s;
  s.base = p;
  s.frame = orthonormal_frame(m, p);
  s.elements.push_back(Mat::Identity(n, n));
  s.loops.push_back({});

  std::mt19937_64 rng(seed);
  for (int loop = 0; loop < n_loops; ++loop) {
    bool done = false;
    for (int attempt = 0; attempt <= opts.max_retries && !done; ++attempt) {
      Vec u1 = random_unit(rng, n);
      Vec u2 = random_unit(rng, n);
      if (n > 1 && std::abs(u1.dot(u2)) > 0.95) continue;
      try {
        const Vec q1 = exp_map(m, p, scale * (s.frame * u1), opts.steps);
        const Vec q2 = exp_map(m, p, scale * (s.frame * u2), opts.steps);
        Mat a = triangle_holonomy(m, p, q1, q2, s.frame, opts);
        LoopRecord rec{{p, q1, q2}, std::numeric_limits<double>::quiet_NaN()};
        if (n == 2) rec.angle = std::atan2(a(1, 0), a(0, 0));
        s.elements.push_back(std::move(a));
        s.loops.push_back(std::move(rec));
        done = true;
      } catch (const TruncationError&) {
      } catch (const DomainError&) {
      } catch (const ConvergenceError&) {
      }
    }
    if (!done)
      throw SamplingError("sample_holonomy: loop " + std::to_string(loop) +
                          " kept leaving the chart after " +
                          std::to_string(opts.max_retries) + " retries");
  }
  return s;
}

HolonomySample group_closure(const HolonomySample& s, int depth,
                             double dedupe_tol, size_t max_elements) {
  if (depth < 1) throw ArgumentError("group_closure needs depth >= 1");
  if (s.elements.empty()) return s;
  const int n = s.dim();
  MatrixSet set(n, dedupe_tol);
  HolonomySample out;
  out.base = s.base;
  out.frame = s.frame;
  out.generation_depth = s.generation_depth * depth;
  // Inputs are kept verbatim, even if two of them are closer than the tolerance.
  for (size_t i = 0; i < s.elements.size(); ++i) {
    set.insert(s.elements[i]);
    out.elements.push_back(s.elements[i]);
    out.loops.push_back(i < s.loops.size() ? s.loops[i] : LoopRecord{});
  }
  std::vector<Mat> generators;
  for (const Mat& a : s.elements) {
    generators.push_back(a);
    generators.push_back(a.transpose());
  }
  for (const Mat& g : generators)
    if (set.insert(g)) {
      out.elements.push_back(g);
      out.loops.push_back({});
    }

  std::vector<Mat> frontier = set.items();
  for (int level = 2; level <= depth && !frontier.empty(); ++level) {
    std::vector<Mat> next;
    for (const Mat& a : frontier) {
      for (const Mat& g : generators) {
        if (set.size() >= max_elements) break;
        Mat c = a * g;
        if (set.insert(c)) {
          out.elements.push_back(c);
          out.loops.push_back({});
          next.push_back(std::move(c));
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

TransitivityResult transitivity_test(const HolonomySample& s, int n_dirs,
                                     double eps, std::uint64_t seed) {
  if (s.elements.empty())
    throw ArgumentError("transitivity_test: empty element list");
  const int n = s.dim();
  if (n < 2) throw ArgumentError("transitivity_test needs dim >= 2");
  if (n_dirs < 1) throw ArgumentError("transitivity_test needs n_dirs >= 1");
  std::vector<Vec> orbit;
  orbit.reserve(s.elements.size());
  const Vec e = Vec::Unit(n, 0);
  for (const Mat& a : s.elements) orbit.push_back((a * e).normalized());

  std::mt19937_64 rng(seed);
  double score = 0.0;
  for (int k = 0; k < n_dirs; ++k) {
    const Vec u = random_unit(rng, n);
    double best = 0.0;
    for (const Vec& o : orbit) best = std::max(best, std::abs(u.dot(o)));
    score = std::max(score, std::acos(std::min(1.0, best)));
  }
  return {score <= eps ? Transitivity::kTransitive : Transitivity::kNonTransitive,
          score};
}

SplittingReport invariant_subspaces(const HolonomySample& s, double tol,
                                    std::uint64_t seed) {
  if (s.elements.empty())
    throw ArgumentError("invariant_subspaces: empty element list");
  const int n = s.dim();
  const double count = static_cast<double>(s.elements.size());
  SplittingReport report;

  // V_0: common fixed vectors, kernel of sum (A - I)^T (A - I).
  Mat fixed_form = Mat::Zero(n, n);
  for (const Mat& a : s.elements) {
    const Mat d = a - Mat::Identity(n, n);
    fixed_form += d.transpose() * d;
  }
  fixed_form /= count;
  const Mat v0 = low_eigenspace(fixed_form, tol * tol);
  report.fixed_dim = static_cast<int>(v0.cols());

  const Mat w = orthogonal_complement(v0, n);
  const int k = static_cast<int>(w.cols());
  if (k > 0) {
    // Commutant of the restricted action: X B = B X for all B = W^T A W.
    Mat gram = Mat::Zero(k * k, k * k);
    const Mat ik = Mat::Identity(k, k);
    for (const Mat& a : s.elements) {
      const Mat b = w.transpose() * a * w;
      Mat op(k * k, k * k);
      // vec(B X - X B) = (I (x) B - B^T (x) I) vec(X), column-major.
      for (int c1 = 0; c1 < k; ++c1)
        for (int r1 = 0; r1 < k; ++r1)
          for (int c2 = 0; c2 < k; ++c2)
            for (int r2 = 0; r2 < k; ++r2)
              op(c1 * k + r1, c2 * k + r2) =
                  ik(c1, c2) * b(r1, r2) - b(c2, c1) * ik(r1, r2);
      gram += op.transpose() * op;
    }
    gram /= count;
    const Mat commutant = low_eigenspace(gram, 1e-2 * tol * tol);
    report.commutant_dim = static_cast<int>(commutant.cols());
    if (commutant.cols() == 0) report.warning = true;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Mat> best_blocks;
    for (int trial = 0; trial < 5 && commutant.cols() > 0; ++trial) {
      Vec coeff(commutant.cols());
      for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff[i] = normal(rng);
      const Vec flat = commutant * coeff;
      Mat x = Eigen::Map<const Mat>(flat.data(), k, k);
      x = 0.5 * (x + x.transpose());
      if (x.norm() == 0.0) continue;
      x /= x.norm();
      Eigen::SelfAdjointEigenSolver<Mat> eig(x);
      std::vector<Mat> blocks;
      Eigen::Index start = 0;
      for (Eigen::Index i = 1; i <= k; ++i) {
        if (i == k || eig.eigenvalues()[i] - eig.eigenvalues()[i - 1] > tol) {
          blocks.push_back(w * eig.eigenvectors().middleCols(start, i - start));
          start = i;
        }
      }
      if (blocks.size() > best_blocks.size()) best_blocks = std::move(blocks);
    }
    if (best_blocks.empty()) best_blocks.push_back(w);
    for (Mat& b : best_blocks) {
      report.block_dims.push_back(static_cast<int>(b.cols()));
      report.subspace_bases.push_back(std::move(b));
    }
  }
  if (report.fixed_dim > 0) {
    report.block_dims.push_back(report.fixed_dim);
    report.subspace_bases.push_back(v0);
  }

  for (const Mat& a : s.elements)
    for (const Mat& b : report.subspace_bases) {
      const Mat leak = (Mat::Identity(n, n) - b * b.transpose()) * a * b;
      report.invariance_residual = std::max(report.invariance_residual, leak.norm());
    }
  if (report.invariance_residual > tol) report.warning = true;
  return report;
}

}  // namespace affgeo
