// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "affgeo/geometry.hpp"
#include "affgeo/norms.hpp"

namespace affgeo {

// A point of the target space Y. Its meaning is private to the distance.
using PointLabel = Vec;

// f : M -> Y together with the distance of Y.
struct MapOracle {
  std::string name;
  ChartManifold::Ptr source;
  std::function<PointLabel(const Vec&)> point_map;
  std::function<double(const PointLabel&, const PointLabel&)> distance;
  // Oracles that are not safe for concurrent calls set this.
  bool serial = false;

  double image_distance(const Vec& x, const Vec& z) const {
    return distance(point_map(x), point_map(z));
  }
};

struct OracleDefects {
  double symmetry = 0.0;
  double triangle = 0.0;
  double self_distance = 0.0;
};

// Checks the metric axioms of the oracle distance on sampled triples.
OracleDefects oracle_metric_defects(const MapOracle& o, const Box& region,
                                    int n_triples, std::uint64_t seed);

struct DifferentialOptions {
  int steps = 64;
  // Empty selects default_t_list(source).
  std::vector<double> t_list;
};

// {s * 2^-k, k = 0..6} with s = 0.1 * convexity radius.
std::vector<double> default_t_list(const ChartManifold& m);

struct MetricDifferential {
  double value = 0.0;
  // max_i |d(t_i) / t_i - value|
  double residual = 0.0;
  std::vector<double> t_used;
};

// Slope of t -> d(f(p), f(exp_p(t v))) fitted through the origin.
MetricDifferential metric_differential(const MapOracle& o, const TangentVector& v,
                                       const DifferentialOptions& opts = {});

// |.|^f at p as a seminorm on orthonormal-frame coordinates.
NormField differential_norm(const MapOracle& o, const Vec& p, int n_grid,
                            const DifferentialOptions& opts = {});

enum class Verdict { kAffine, kNotAffine, kInconclusive };
const char* to_string(Verdict v);

struct VerdictThresholds {
  double affine = 1e-4;
  double not_affine = 1e-3;
};

struct AffinityReport {
  Verdict verdict = Verdict::kInconclusive;
  double linearity_residual = std::numeric_limits<double>::quiet_NaN();
  double seminorm_residual = std::numeric_limits<double>::quiet_NaN();
  double parallel_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> kernel_dims;
  // Image speed of each unit-speed segment (the constant c).
  std::vector<double> segment_constants;
  std::uint64_t seed = 0;
  int n_segments = 0;
  int skipped = 0;
  double segment_length = 0.0;
};

// Recomputes the verdict from whichever residuals are present.
void classify(AffinityReport& report, const VerdictThresholds& th = {});

struct AffinityOptions {
  int steps = 64;
  int subdivisions = 8;
  // <= 0 selects 0.5 * convexity radius.
  double segment_length = 0.0;
};

AffinityReport affinity_test(const MapOracle& o, const Box& region,
                             int n_geodesics, std::uint64_t seed,
                             const AffinityOptions& opts = {});

double seminorm_check(const MapOracle& o, const Vec& p, int n_pairs,
                      std::uint64_t seed, const DifferentialOptions& opts = {});

struct ParallelProfile {
  double residual = 0.0;
  std::vector<double> t;
  std::vector<double> values;
};

ParallelProfile parallel_invariance_check(const MapOracle& o, const Curve& gamma,
                                          const TangentVector& v, int n_t,
                                          const DifferentialOptions& opts = {});

// Worst parallel residual over random unit-speed geodesics of length
// `length` started in `region`, transporting random unit vectors.
double parallel_invariance_suite(const MapOracle& o, const Box& region,
                                 int n_geodesics, int n_t, double length,
                                 std::uint64_t seed, int steps = 64,
                                 const DifferentialOptions& opts = {});

struct RegularityEstimate {
  std::vector<double> t;
  std::vector<double> quotients;
  double limit = 0.0;
  bool regular = false;
};

// (|h+tv|^f + |h-tv|^f - 2|h|^f) / t and its polynomial extrapolation to t = 0.
RegularityEstimate regular_vector_test(const MapOracle& o, const TangentVector& h,
                                       const TangentVector& v,
                                       const std::vector<double>& t_list,
                                       double tol = 1e-3,
                                       const DifferentialOptions& opts = {});

struct MainLemmaPoint {
  double r = 0.0;
  double dt = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  std::string error;
};

struct MainLemmaOptions {
  int steps = 64;
  double log_tol = 1e-13;
  double dt_factor = 0.1;
};

// ||v_r - v_{-r}||_g / r along the geodesic with initial velocity gamma_dir.
std::vector<MainLemmaPoint> mainlemma_check(const ChartManifold& m, const Vec& p,
                                            const TangentVector& gamma_dir,
                                            const TangentVector& h,
                                            const std::vector<double>& r_list,
                                            const MainLemmaOptions& opts = {});

struct KernelReport {
  // Orthonormal in frame coordinates, and the same vectors in chart components.
  Mat basis_frame;
  Mat basis_chart;
  int dim = 0;
  double threshold = 0.0;
  double max_value = 0.0;
};

// Zero set of |.|^f at p. eps_rel scales the threshold by the largest grid value.
KernelReport kernel_distribution(const MapOracle& o, const Vec& p, int n_grid,
                                 double eps_rel = 1e-3,
                                 const DifferentialOptions& opts = {});

// Largest principal angle between column spans of orthonormal a and b;
// pi/2 when the dimensions differ.
double max_principal_angle(const Mat& a, const Mat& b);

// Transports the kernel at gamma(0) along the geodesic and compares it with
// the kernel computed at n_t nodes.
double kernel_parallelism(const MapOracle& o, const Curve& gamma, int n_t,
                          int n_grid, double eps_rel = 1e-3,
                          const DifferentialOptions& opts = {});

// Declared factors f = f_i o f_a o f_p.
struct DeclaredDecomposition {
  MapOracle projection;            // f_p : M -> M1, labels are M1 coordinates
  ChartManifold::Ptr quotient;     // M1
  std::function<NormField(const Vec&)> finsler;  // f_a, frame coordinates of M1
  MapOracle embedding;             // f_i : (M1, f_a) -> Y
};

struct FactorCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct DecompositionReport {
  std::vector<FactorCheck> checks;
  std::vector<std::string> failures;
  bool passed = false;
};

struct DecompositionOptions {
  int n_points = 6;
  int n_pairs = 20;
  double tolerance = 1e-8;
  double angle_tolerance = 1e-8;
  int kernel_grid = 180;
  std::uint64_t seed = 1;
};

DecompositionReport verify_decomposition(const MapOracle& o, const Box& region,
                                         const DeclaredDecomposition& declared,
                                         const DecompositionOptions& opts = {});

}  // namespace affgeo
