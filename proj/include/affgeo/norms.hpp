// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "affgeo/geometry.hpp"
#include "affgeo/holonomy.hpp"

namespace affgeo {

// Deterministic direction grid on the unit sphere of R^dim. `n_grid` is the
// angular resolution expressed as points per great circle: dim 2 gives
// n_grid points, dim 3 an icosphere (level 4 for 720, i.e. 2562 points),
// higher dimensions a product of an n_grid/30 circle with the grid in
// dim - 2 at that same resolution.
std::shared_ptr<const std::vector<Vec>> sphere_grid(int dim, int n_grid);

enum class NormKind { kSeminorm, kNorm, kMinkowskiCandidate };

const char* to_string(NormKind kind);

// A (semi-)norm on a tangent space written in orthonormal-frame
// coordinates. Values on the direction grid are cached at construction.
class NormField {
 public:
  using EvalFn = std::function<double(const Vec&)>;

  NormField(int dim, EvalFn eval, NormKind kind, int n_grid = 720);

  double operator()(const Vec& v) const { return eval_(v); }
  int dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  int n_grid() const { return n_grid_; }
  const std::vector<Vec>& directions() const { return *grid_; }
  const std::vector<double>& values() const { return values_; }
  double grid_min() const;
  double grid_max() const;

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  int dim_;
  EvalFn eval_;
  NormKind kind_;
  int n_grid_;
  std::shared_ptr<const std::vector<Vec>> grid_;
  std::vector<double> values_;
  std::vector<std::string> warnings_;
};

NormField euclidean_norm(int dim, int n_grid = 720);
NormField linf_norm(int dim, int n_grid = 720);
NormField l1_norm(int dim, int n_grid = 720);
NormField scaled(const NormField& q, double factor);

// Property probes. Homogeneity uses lambda in {-2, -1, 0.5, 3}.
double homogeneity_defect(const NormField& q, int n_samples, std::uint64_t seed);
// max over pairs of q((u+v)/2) - (q(u) + q(v))/2, clamped at 0.
double convexity_defect(const NormField& q, int n_pairs, std::uint64_t seed);

// max over the grid of |log(q1(u) / q2(u))|.
double norm_distance(const NormField& q1, const NormField& q2);
// Distance to the closest multiple c * |.|_2: half the spread of log q.
double distance_to_euclidean(const NormField& q);

// Uniform average of q(A v) over the sample elements.
NormField average_norm(const NormField& q, const HolonomySample& s);
// max over grid u and elements A of |log(q(A u) / q(u))|.
double invariance_residual(const NormField& q, const HolonomySample& s);

// Gauge of the convex hull of {+-A seed}. Degenerate hulls give the gauge on
// the hull's span composed with orthogonal projection (kind seminorm).
NormField orbit_hull_norm(const HolonomySample& s, const Vec& seed,
                          int n_grid = 720);

// Gauge of the symmetric polytope conv{+-vertices}; exposed for testing.
class PolytopeGauge {
 public:
  explicit PolytopeGauge(const std::vector<Vec>& vertices);
  double operator()(const Vec& v) const;
  int rank() const { return rank_; }
  int dim() const { return dim_; }
  // Number of evaluations that fell back to the direction-grid bound.
  size_t fallbacks() const { return *fallbacks_; }

 private:
  double solve(const Vec& v) const;
  double grid_bound(const Vec& v) const;

  int dim_ = 0;
  int rank_ = 0;
  Mat span_;                 // dim x rank orthonormal basis of the hull span
  Mat vertices_;             // rank x (2N), +-vertices in span coordinates
  std::vector<int> start_;   // initial basis indices
  std::shared_ptr<size_t> fallbacks_;
};

// sum_i q_i(B_i^T v) over the blocks of the splitting.
NormField block_sum_norm(const SplittingReport& split,
                         const std::vector<NormField>& block_norms,
                         int n_grid = 720);

struct SmoothedNorm {
  NormField norm;
  // norm_distance(norm, input) and the ratio C = distance / eps.
  double distance = 0.0;
  double constant = 0.0;
};

// sqrt((1 - eps) q_moll^2 + eps |v|^2), with q_moll the average of q over a
// cap of angular radius eps around each direction.
SmoothedNorm minkowski_smooth(const NormField& q, double eps);

struct MinkowskiReport {
  double smooth_residual = 0.0;
  double hessian_min_eigen = 0.0;
  bool minkowski = false;
};

// Finite-difference Hessian of q^2 / 2 at unit probes (steps 1e-2, 5e-3).
MinkowskiReport minkowski_check(const NormField& q, int n_probe,
                                std::uint64_t seed = 1);
MinkowskiReport minkowski_check(const NormField& q,
                                const std::vector<Vec>& probes);

// eval(x) = q(section_basis * x) on section coordinates.
NormField restrict_norm_to_section(const NormField& q, const Mat& section_basis,
                                   int n_grid = 720);

// Header-first CSV: u0,...,u{d-1},value.
void export_grid_csv(const NormField& q, const std::string& path);

}  // namespace affgeo
