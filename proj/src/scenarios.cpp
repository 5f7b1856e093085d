// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "affgeo/manifolds.hpp"
#include "affgeo/oracles.hpp"
#include "suite.hpp"

namespace affgeo {

namespace {

using detail::Suite;
using detail::number;
using detail::to_json;
using nlohmann::json;
namespace orc = oracles;

constexpr double kPi = std::numbers::pi;

Vec vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Box box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  return {vec(lo), vec(hi)};
}

Vec center(const Box& b) { return 0.5 * (b.lo + b.hi); }

Eigen::Vector3d embed(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

DifferentialOptions differential(const Suite& s) { return {s.steps(), {}}; }

// Linearity, seminorm and parallel residuals of one oracle, combined into a verdict.
AffinityReport assess(Suite& s, const MapOracle& o, const Box& region, double length,
                      int seed_offset) {
  const int n_geodesics = s.param_int("n_geodesics", 20);
  const int n_pairs = s.param_int("seminorm_pairs", 10);
  const int n_t = s.param_int("parallel_nodes", 4);
  AffinityOptions opts;
  opts.steps = s.steps();
  opts.segment_length = length;
  AffinityReport r = affinity_test(o, region, n_geodesics, s.seed(seed_offset), opts);
  r.seminorm_residual =
      seminorm_check(o, center(region), n_pairs, s.seed(seed_offset + 1), differential(s));
  r.parallel_residual = parallel_invariance_suite(o, region, n_geodesics, n_t, length,
                                                  s.seed(seed_offset + 2), s.steps(),
                                                  differential(s));
  classify(r);
  return r;
}

double worst_residual(const AffinityReport& r) {
  return std::max({r.linearity_residual, r.seminorm_residual, r.parallel_residual});
}

// |u|^f / |u|_g for unit directions at random basepoints of the region.
std::vector<double> homothety_constants(Suite& s, const MapOracle& o, const Box& region,
                                        int seed_offset) {
  const int n_base = s.param_int("basepoints", 10);
  const int n_dirs = s.param_int("directions_per_basepoint", 3);
  const ChartManifold& m = *o.source;
  std::mt19937_64 rng(s.seed(seed_offset));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  std::vector<double> out;
  for (int b = 0; b < n_base; ++b) {
    Vec p(m.dim());
    for (int i = 0; i < m.dim(); ++i)
      p[i] = region.lo[i] + unit(rng) * (region.hi[i] - region.lo[i]);
    const Mat frame = orthonormal_frame(m, p);
    for (int k = 0; k < n_dirs; ++k) {
      Vec u(m.dim());
      for (int i = 0; i < m.dim(); ++i) u[i] = normal(rng);
      u.normalize();
      out.push_back(metric_differential(o, {p, frame * u}, differential(s)).value);
    }
  }
  return out;
}

json affinity_json(const AffinityReport& r, const std::vector<KernelReport>& kernels = {}) {
  json j = to_json(r);
  if (!kernels.empty()) {
    json dims = json::array();
    for (const KernelReport& k : kernels) dims.push_back(k.dim);
    j["kernel_dims"] = dims;
  }
  if (!r.segment_constants.empty()) {
    const auto [lo, hi] =
        std::minmax_element(r.segment_constants.begin(), r.segment_constants.end());
    j["segment_constant_range"] = {number(*lo), number(*hi)};
  }
  return j;
}

std::vector<KernelReport> kernels_at(Suite& s, const MapOracle& o,
                                     const std::vector<Vec>& points) {
  const int kgrid = s.param_int("kernel_grid", 180);
  std::vector<KernelReport> out;
  for (const Vec& p : points) out.push_back(kernel_distribution(o, p, kgrid, 1e-3, differential(s)));
  return out;
}

// ---------------------------------------------------------------------------

void geodesic_oracles(Suite& s) {
  const auto sphere = make_sphere();
  s.describe_manifold(*sphere);
  const int n = s.param_int("oracle_steps", 1024);
  const int n_circles = s.param_int("great_circles", 6);

  std::mt19937_64 rng(s.seed());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sphere_err = 0.0, drift = 0.0;
  for (int k = 0; k < n_circles; ++k) {
    double th0 = kPi / 2, ph0 = 0.0, alpha = kPi / 2;
    Eigen::Vector3d x0, v0;
    for (int attempt = 0;; ++attempt) {
      if (k > 0) {
        th0 = 1.2 + 0.7 * unit(rng);
        ph0 = -1.0 + 2.0 * unit(rng);
        alpha = 2.0 * kPi * unit(rng);
      }
      x0 = embed(th0, ph0);
      const Eigen::Vector3d e_th(std::cos(th0) * std::cos(ph0), std::cos(th0) * std::sin(ph0),
                                 -std::sin(th0));
      const Eigen::Vector3d e_ph(-std::sin(ph0), std::cos(ph0), 0.0);
      v0 = std::cos(alpha) * e_th + std::sin(alpha) * e_ph;
      bool inside = true;
      for (int i = 0; i <= 200 && inside; ++i) {
        const Eigen::Vector3d x = std::cos(kPi / 2 * i / 200) * x0 + std::sin(kPi / 2 * i / 200) * v0;
        const double th = std::acos(std::clamp(x.z(), -1.0, 1.0));
        inside = th > 0.25 && th < kPi - 0.25 &&
                 std::abs(ph0 + wrap_angle(std::atan2(x.y(), x.x()) - ph0)) < 3.9;
      }
      if (inside || k == 0) break;
      if (attempt > 1000) throw SamplingError("geodesic-oracles: no admissible great circle");
    }
    const Vec p = vec({th0, ph0});
    const Vec v = vec({std::cos(alpha), std::sin(alpha) / std::sin(th0)});
    const Curve c = integrate_geodesic(*sphere, p, {p, v}, kPi / 2, n);
    for (const CurveNode& node : c.nodes) {
      const Eigen::Vector3d x = std::cos(node.t) * x0 + std::sin(node.t) * v0;
      const double th = std::acos(std::clamp(x.z(), -1.0, 1.0));
      const double ph = std::atan2(x.y(), x.x());
      sphere_err = std::max({sphere_err, std::abs(node.x[0] - th),
                             std::abs(wrap_angle(node.x[1] - ph))});
    }
    drift = std::max(drift, speed_drift(*sphere, c));
  }

  const auto hyperbolic = make_hyperbolic();
  const Vec h0 = vec({0.0, 1.0});
  const Curve hc = integrate_geodesic(*hyperbolic, h0, {h0, vec({0.0, 1.0})}, 1.0, n);
  const double hyp_err = (hc.end() - vec({0.0, std::exp(1.0)})).norm();
  drift = std::max(drift, speed_drift(*hyperbolic, hc));

  s.results()["great_circles"] = {{"count", n_circles}, {"steps", n},
                                  {"max_chart_error", number(sphere_err)}};
  s.results()["hyperbolic_vertical"] = {{"endpoint", to_json(hc.end())},
                                        {"error", number(hyp_err)}};
  s.results()["speed_drift"] = number(drift);
  s.check_le("closed_form_geodesics", 1, std::max(sphere_err, hyp_err), 1e-6);
  s.check_le("speed_conservation", 0, drift, 1e-6);

  // Fourth-order contract on a tilted great circle.
  const Vec p = vec({1.3, 0.1});
  const Vec v = vec({0.6, 0.8 / std::sin(1.3)});
  const Vec fine = exp_map(*sphere, p, v, 4096);
  const double e16 = (exp_map(*sphere, p, v, 16) - fine).norm();
  const double e32 = (exp_map(*sphere, p, v, 32) - fine).norm();
  s.results()["order_of_accuracy"] = {{"error_16", number(e16)}, {"error_32", number(e32)}};
  s.check_ge("step_halving_gain", 0, e16 / e32, 8.0);

  const Curve tilted = integrate_geodesic(*sphere, p, {p, v}, 1.0, s.steps());
  const Vec w = vec({0.3, -1.1});
  const TangentVector moved = parallel_transport(*sphere, tilted, {p, w});
  const double iso = std::abs(sphere->norm(moved.base, moved.components) - sphere->norm(p, w)) /
                     sphere->norm(p, w);
  s.check_le("transport_isometry", 0, iso, 1e-6);

  const Vec target = exp_map(*sphere, p, 0.5 * v, s.steps());
  const TangentVector back = riemannian_log(*sphere, p, target, 1e-12, {s.steps(), 60});
  s.check_le("log_exp_round_trip", 0, (back.components - 0.5 * v).norm(), 1e-8);

  const ChristoffelSymbols g_eq = christoffel(*sphere, vec({kPi / 2, 0.0}));
  const ChristoffelSymbols g_45 = christoffel(*sphere, vec({kPi / 4, 0.0}));
  s.results()["christoffel"] = {{"theta_phiphi_at_equator", number(g_eq(0, 1, 1))},
                                {"phi_thetaphi_at_quarter", number(g_45(1, 0, 1))}};
  s.check_le("christoffel_closed_form", 0,
             std::max(std::abs(g_eq(0, 1, 1)), std::abs(g_45(1, 0, 1) - 1.0)), 1e-10);
}

void sphere_transitive(Suite& s) {
  const auto sphere = make_sphere();
  s.describe_manifold(*sphere);
  const Vec p = vec({kPi / 2, 0.0});
  SamplingOptions sampling;
  sampling.steps = s.steps();

  const int n_tri = s.param_int("triangles", 20);
  const double tri_scale = s.param("triangle_scale", 0.4);
  const HolonomySample tri = sample_holonomy(*sphere, p, n_tri, tri_scale, s.seed(1), sampling);
  double gb = 0.0;
  for (const LoopRecord& loop : tri.loops) {
    if (loop.vertices.size() != 3) continue;
    const Eigen::Vector3d a = embed(loop.vertices[0][0], loop.vertices[0][1]);
    const Eigen::Vector3d b = embed(loop.vertices[1][0], loop.vertices[1][1]);
    const Eigen::Vector3d c = embed(loop.vertices[2][0], loop.vertices[2][1]);
    const double area =
        2.0 * std::atan2(a.dot(b.cross(c)), 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
    gb = std::max(gb, std::abs(loop.angle - area));
  }
  s.results()["gauss_bonnet"] = {{"triangles", n_tri}, {"max_angle_error", number(gb)}};
  s.check_le("gauss_bonnet", 2, gb, 1e-3);

  const int loops = s.param_int("loops", 8);
  const double scale = s.param("loop_scale", 0.5);
  const int depth = s.param_int("closure_depth", 32);
  const double dedupe = s.param("dedupe", 1e-2);
  const int n_dirs = s.param_int("directions", 200);
  const double eps = s.param("coverage_eps", 0.1);
  const HolonomySample sample = sample_holonomy(*sphere, p, loops, scale, s.seed(2), sampling);
  const HolonomySample closed = group_closure(sample, depth, dedupe);
  const TransitivityResult raw = transitivity_test(sample, n_dirs, eps, s.seed(3));
  const TransitivityResult tr = transitivity_test(closed, n_dirs, eps, s.seed(3));
  s.results()["holonomy"] = to_json(closed);
  s.results()["transitivity"] = to_json(tr);
  s.results()["transitivity_before_closure"] = to_json(raw);
  s.check_le("coverage_score", 3, tr.coverage_score, eps);
  s.check_is("closure_keeps_transitivity", 0,
             !(raw.verdict == Transitivity::kTransitive &&
               tr.verdict == Transitivity::kNonTransitive),
             true);
  s.check_le("orthogonality", 0, closed.orthogonality_residual(), 1e-6);

  const NormField linf = linf_norm(2, s.grid());
  const NormField avg = average_norm(linf, closed);
  const double to_round = distance_to_euclidean(avg);
  s.results()["averaged_linf"] = {{"norm_distance_to_euclidean", number(to_round)}};
  s.check_le("averaged_linf_is_round", 4, to_round, 0.02);
  s.export_csv("averaged_linf.csv", avg);

  const NormField avg_raw = average_norm(linf, sample);
  const double before = invariance_residual(linf, sample);
  const double after = invariance_residual(avg_raw, sample);
  s.results()["averaged_linf_raw_sample"] = {{"invariance_residual_before", number(before)},
                                             {"invariance_residual", number(after)}};
  s.check_le("averaging_contracts", 0, after - before, 1e-9);

  const NormField hull = orbit_hull_norm(sample, Vec::Unit(2, 0), s.grid());
  s.results()["orbit_hull_raw_sample"] = {
      {"norm_distance_to_euclidean", number(distance_to_euclidean(hull))},
      {"invariance_residual", number(invariance_residual(hull, sample))}};
  s.export_csv("orbit_hull.csv", hull);
  s.results()["splitting"] = to_json(invariant_subspaces(closed, 1e-3, s.seed(4)));
}

struct ProductSetup {
  ChartManifold::Ptr m;
  Vec p;
  HolonomySample sample;
  HolonomySample closed;
  SplittingReport split;
};

ProductSetup product_holonomy(Suite& s, ChartManifold::Ptr m, const Vec& p,
                              const std::vector<int>& blocks, int fixed) {
  s.describe_manifold(*m);
  SamplingOptions sampling;
  sampling.steps = s.steps();
  const int loops = s.param_int("loops", 8);
  const double scale = s.param("loop_scale", 0.3);
  const int depth = s.param_int("closure_depth", 4);
  const double dedupe = s.param("dedupe", 1e-2);
  const int n_dirs = s.param_int("directions", 200);
  const double eps = s.param("coverage_eps", 0.1);

  ProductSetup out{m, p, sample_holonomy(*m, p, loops, scale, s.seed(1), sampling), {}, {}};
  out.closed = group_closure(out.sample, depth, dedupe);
  const TransitivityResult tr = transitivity_test(out.closed, n_dirs, eps, s.seed(2));
  out.split = invariant_subspaces(out.closed, 1e-3, s.seed(3));
  s.results()["holonomy"] = to_json(out.closed);
  s.results()["transitivity"] = to_json(tr);
  s.results()["splitting"] = to_json(out.split);
  s.check_is("non_transitive", 3, to_json(tr)["verdict"], "non_transitive");
  s.check_is("splitting", 3, json{{"block_dims", out.split.block_dims}, {"fixed_dim", out.split.fixed_dim}},
             json{{"block_dims", blocks}, {"fixed_dim", fixed}});
  s.check_le("orthogonality", 0, out.closed.orthogonality_residual(), 1e-6);
  s.check_le("block_invariance", 0, out.split.invariance_residual, 1e-4);
  return out;
}

std::vector<NormField> euclidean_blocks(const SplittingReport& split, int grid) {
  std::vector<NormField> out;
  for (int d : split.block_dims) out.push_back(euclidean_norm(d, grid));
  return out;
}

void product_s2xr(Suite& s) {
  const Vec p = vec({kPi / 2, 0.0, 0.0});
  const ProductSetup setup =
      product_holonomy(s, make_product({make_sphere(), make_euclidean(1)}), p, {2, 1}, 1);
  double blockwise = 0.0;
  for (const Mat& a : setup.closed.elements)
    blockwise = std::max({blockwise, a.block(0, 2, 2, 1).norm(), a.block(2, 0, 1, 2).norm(),
                          std::abs(a(2, 2) - 1.0)});
  s.check_le("blockwise_elements", 0, blockwise, 1e-4);

  const NormField block_l1 = block_sum_norm(setup.split, euclidean_blocks(setup.split, s.grid()), s.grid());
  const double inv = invariance_residual(block_l1, setup.closed);
  s.results()["block_l1_norm"] = {{"invariance_residual", number(inv)},
                                  {"norm_distance_to_euclidean", number(distance_to_euclidean(block_l1))}};
  s.check_le("block_l1_invariant", 0, inv, 1e-6);
  s.export_csv("block_l1_norm.csv", block_l1);

  const Box region = box({1.0, -1.0, -1.0}, {2.1, 1.0, 1.0});
  const double length = s.param("segment_length", 0.35);
  const MapOracle proj = orc::make("projection-to-line", setup.m, orc::coordinate_map({2}),
                                   orc::euclidean_distance());
  const MetricDifferential md = metric_differential(proj, {p, vec({0.3, -0.2, 2.0})}, differential(s));
  s.results()["projection_differential"] = {{"value", number(md.value)}, {"residual", number(md.residual)}};
  s.check_le("projection_differential", 0, std::abs(md.value - 2.0) + md.residual, 1e-6);

  const AffinityReport pr = assess(s, proj, region, length, 10);
  const std::vector<KernelReport> kernels =
      kernels_at(s, proj, {p, vec({1.2, 0.5, -0.3}), vec({1.9, -0.4, 0.6})});
  s.results()["projection"] = affinity_json(pr, kernels);
  s.check_le("projection_parallel", 5, pr.parallel_residual, 1e-4);
  s.check_is("projection_verdict", 0, to_string(pr.verdict), "affine");
  bool dims_ok = true;
  for (const KernelReport& k : kernels) dims_ok = dims_ok && k.dim == 2;
  s.check_is("projection_kernel_dims", 0, dims_ok, true);
  const Curve gamma = integrate_geodesic(*setup.m, p, {p, vec({0.6, 0.48, 0.64})}, length, s.steps());
  const double kpar = kernel_parallelism(proj, gamma, 4, s.param_int("kernel_grid", 180), 1e-3, differential(s));
  s.results()["kernel_parallelism"] = number(kpar);
  s.check_le("kernel_parallelism", 0, kpar, 1e-3);

  const MapOracle l1 = orc::make(
      "l1-change", setup.m, orc::identity_map(),
      orc::product_distance({{0, 2, orc::great_circle_distance()}, {2, 1, orc::euclidean_distance()}}, true));
  const AffinityReport lr = assess(s, l1, region, length, 20);
  s.results()["l1_change"] = affinity_json(lr);
  s.check_le("l1_change_parallel", 5, lr.parallel_residual, 1e-4);
  s.check_is("l1_change_verdict", 0, to_string(lr.verdict), "affine");
  s.export_csv("l1_change_differential.csv", differential_norm(l1, p, s.param_int("differential_grid", 180), differential(s)));
}

void product_s2xs2(Suite& s) {
  const Vec p = vec({kPi / 2, 0.0, kPi / 2, 0.0});
  const auto sphere = make_sphere();
  const ProductSetup setup = product_holonomy(s, make_product({sphere, sphere}), p, {2, 2}, 0);

  const double eps = s.param("smoothing_eps", 0.05);
  const NormField block_l1 = block_sum_norm(setup.split, euclidean_blocks(setup.split, s.grid()), s.grid());
  const SmoothedNorm smooth = minkowski_smooth(block_l1, eps);
  const double inv = invariance_residual(smooth.norm, setup.sample);
  const double to_round = distance_to_euclidean(smooth.norm);
  const MinkowskiReport mk = minkowski_check(smooth.norm, s.param_int("minkowski_probes", 20), s.seed(5));
  s.results()["invariant_norm"] = {{"smoothing_eps", eps},
                                   {"smoothing_distance", number(smooth.distance)},
                                   {"smoothing_constant", number(smooth.constant)},
                                   {"invariance_residual", number(inv)},
                                   {"norm_distance_to_euclidean", number(to_round)},
                                   {"minkowski", to_json(mk)}};
  s.check_le("smoothed_norm_invariant", 4, inv, 1e-3);
  s.check_ge("smoothed_norm_not_euclidean", 4, to_round, 0.1);
  s.check_is("smoothed_norm_minkowski", 0, mk.minkowski, true);
  s.export_csv("smoothed_block_norm.csv", smooth.norm);

  // Section through one direction of each block; the sign group acts on it.
  Mat section(4, 2);
  section.col(0) = setup.split.subspace_bases.at(0).col(0);
  section.col(1) = setup.split.subspace_bases.at(1).col(0);
  const NormField restricted = restrict_norm_to_section(block_l1, section, s.grid());
  double l1_gap = 0.0;
  for (size_t i = 0; i < restricted.directions().size(); ++i) {
    const Vec& u = restricted.directions()[i];
    l1_gap = std::max(l1_gap, std::abs(restricted.values()[i] - u.lpNorm<1>()));
  }
  HolonomySample signs;
  signs.base = Vec::Zero(2);
  signs.frame = Mat::Identity(2, 2);
  for (double a : {1.0, -1.0})
    for (double b : {1.0, -1.0}) {
      Mat d = Mat::Zero(2, 2);
      d(0, 0) = a;
      d(1, 1) = b;
      signs.elements.push_back(d);
      signs.loops.push_back({});
    }
  const double sign_inv = invariance_residual(restricted, signs);
  s.results()["section"] = {{"l1_gap", number(l1_gap)}, {"sign_group_residual", number(sign_inv)}};
  s.check_le("section_restriction_is_l1", 0, l1_gap, 1e-12);
  s.check_le("section_sign_group_invariant", 0, sign_inv, 1e-12);
  s.export_csv("section_norm.csv", restricted);

  const Box region = box({1.0, -1.0, 1.0, -1.0}, {2.1, 1.0, 2.1, 1.0});
  const MapOracle proj = orc::make("projection-to-first-factor", setup.m, orc::coordinate_map({0, 1}),
                                   orc::great_circle_distance());
  const AffinityReport pr = assess(s, proj, region, s.param("segment_length", 0.35), 10);
  s.results()["projection"] = affinity_json(pr, kernels_at(s, proj, {p}));
  s.check_le("projection_parallel", 5, pr.parallel_residual, 1e-4);
  s.check_is("projection_verdict", 0, to_string(pr.verdict), "affine");
}

void sphere_homothety(Suite& s) {
  const auto sphere = make_sphere();
  s.describe_manifold(*sphere);
  const double factor = s.param("factor", 2.0);
  const Box region = box({1.0, -1.0}, {2.1, 1.0});
  const MapOracle o = orc::make("rescaled-sphere", sphere, orc::identity_map(),
                                orc::great_circle_distance(factor));
  const AffinityReport r = assess(s, o, region, s.param("segment_length", 0.35), 10);
  s.results()["affinity"] = affinity_json(r);
  s.check_le("parallel", 5, r.parallel_residual, 1e-4);
  s.check_is("verdict", 0, to_string(r.verdict), "affine");

  const std::vector<double> a = homothety_constants(s, o, region, 20);
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  double mean = 0.0;
  for (double x : a) mean += x / static_cast<double>(a.size());
  double segment_gap = 0.0;
  for (double c : r.segment_constants) segment_gap = std::max(segment_gap, std::abs(c - mean));
  s.results()["homothety"] = {{"constant", number(mean)},
                              {"spread", number(*hi - *lo)},
                              {"samples", a.size()},
                              {"segment_constant_gap", number(segment_gap)}};
  s.check_le("single_constant", 6, *hi - *lo, 1e-4);
  s.check_le("constant_matches_factor", 0, std::abs(mean - factor), 1e-4);
  s.export_csv("differential.csv", differential_norm(o, vec({kPi / 2, 0.0}), s.param_int("differential_grid", 180), differential(s)));
}

void sphere_constant(Suite& s) {
  const auto sphere = make_sphere();
  s.describe_manifold(*sphere);
  const Box region = box({1.0, -1.0}, {2.1, 1.0});
  const MapOracle o = orc::make("constant", sphere, orc::constant_map(vec({0.0, 0.0})),
                                orc::euclidean_distance());
  const AffinityReport r = assess(s, o, region, s.param("segment_length", 0.35), 10);
  const std::vector<KernelReport> kernels = kernels_at(s, o, {center(region)});
  s.results()["affinity"] = affinity_json(r, kernels);
  s.check_le("parallel", 5, r.parallel_residual, 1e-4);
  s.check_is("verdict", 0, to_string(r.verdict), "affine");
  s.check_is("kernel_is_whole_space", 0, kernels.front().dim, 2);
  const std::vector<double> a = homothety_constants(s, o, region, 20);
  const double worst = *std::max_element(a.begin(), a.end());
  s.results()["homothety"] = {{"constant", number(worst)}, {"samples", a.size()}};
  s.check_le("zero_constant", 0, worst, 1e-12);
}

void mainlemma(Suite& s, const ChartManifold::Ptr& m, const Vec& p, const Vec& along,
               const Vec& h, bool with_flat_control) {
  s.describe_manifold(*m);
  const std::vector<double> r_list = {0.4, 0.2, 0.1, 0.05};
  MainLemmaOptions opts;
  opts.steps = s.steps();
  opts.dt_factor = s.param("dt_factor", 0.1);
  opts.log_tol = s.param("log_tol", 1e-13);
  const std::vector<MainLemmaPoint> pts = mainlemma_check(*m, p, {p, along}, {p, h}, r_list, opts);
  std::vector<double> factors;
  bool converged = true, decreasing = true;
  double worst_slope = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    converged = converged && pts[i].converged;
    if (i + 1 < pts.size()) {
      factors.push_back(pts[i].ratio / pts[i + 1].ratio);
      decreasing = decreasing && pts[i + 1].ratio < pts[i].ratio;
    }
    worst_slope = std::max(worst_slope, pts[i].ratio / pts[i].r);
  }
  json fj = json::array();
  for (double f : factors) fj.push_back(number(f));
  s.results()["ratios"] = to_json(pts);
  s.results()["halving_factors"] = fj;
  s.check_is("logs_converged", 0, converged, true);
  s.check_is("ratios_decrease", 0, decreasing, true);
  // O(r): ratio / r stays bounded by its value at the largest radius.
  s.check_le("linear_bound", 0, worst_slope, pts.front().ratio / pts.front().r * (1.0 + 1e-9));
  s.check_in("halving_factors", 7, factors, 1.7, 2.3);

  if (with_flat_control) {
    const auto plane = make_euclidean(2);
    const Vec o = vec({0.0, 0.0});
    const auto flat = mainlemma_check(*plane, o, {o, vec({1.0, 0.0})}, {o, vec({0.0, 1.0})}, r_list, opts);
    double worst = 0.0;
    for (const MainLemmaPoint& q : flat) worst = std::max(worst, q.converged ? q.ratio : INFINITY);
    s.results()["flat_control"] = to_json(flat);
    s.check_le("flat_control", 0, worst, 1e-8);
  }
}

void regular_corners(Suite& s) {
  const auto plane = make_euclidean(2);
  s.describe_manifold(*plane);
  const Vec p = vec({0.0, 0.0});
  const std::vector<double> t = {0.4, 0.2, 0.1, 0.05, 0.025};
  const MapOracle linf = orc::make("linf-target", plane, orc::identity_map(), orc::linf_distance());
  const MapOracle round = orc::make("euclidean-target", plane, orc::identity_map(), orc::euclidean_distance());
  const DifferentialOptions d = differential(s);
  const RegularityEstimate corner = regular_vector_test(linf, {p, vec({1, 1})}, {p, vec({1, -1})}, t, 1e-3, d);
  const RegularityEstimate smooth = regular_vector_test(linf, {p, vec({1, 0})}, {p, vec({0, 1})}, t, 1e-3, d);
  const RegularityEstimate euclid = regular_vector_test(round, {p, vec({1, 1})}, {p, vec({1, -1})}, t, 1e-3, d);
  s.results()["linf_corner"] = to_json(corner);
  s.results()["linf_smooth"] = to_json(smooth);
  s.results()["euclidean"] = to_json(euclid);
  s.check_ge("corner_not_regular", 8, corner.limit, 1.9);
  s.check_le("smooth_point_regular", 8, std::abs(smooth.limit), 1e-3);
  s.check_le("euclidean_regular", 0, std::abs(euclid.limit), 1e-3);
  s.export_csv("linf_differential.csv", differential_norm(linf, p, s.param_int("differential_grid", 180), d));
}

void decomposition_r3_l1(Suite& s) {
  const auto space = make_euclidean(3);
  const auto plane = make_euclidean(2);
  s.describe_manifold(*space);
  const Box region = box({-3, -3, -3}, {3, 3, 3});
  const MapOracle o = orc::make("projection-to-l1-plane", space, orc::coordinate_map({0, 1}),
                                orc::l1_distance());
  const int grid = s.grid();
  DeclaredDecomposition declared{
      orc::make("drop-third", space, orc::coordinate_map({0, 1}), orc::euclidean_distance()),
      plane,
      [grid](const Vec&) { return l1_norm(2, grid); },
      orc::make("l1-identity", plane, orc::identity_map(), orc::l1_distance())};
  DecompositionOptions opts;
  opts.seed = s.seed(1);
  opts.kernel_grid = s.param_int("kernel_grid", 180);
  const DecompositionReport good = verify_decomposition(o, region, declared, opts);
  double worst = 0.0;
  for (const FactorCheck& c : good.checks) worst = std::max(worst, c.value);
  s.results()["declared"] = to_json(good);
  s.check_le("declared_factors", 9, worst, 1e-8);

  DeclaredDecomposition wrong = declared;
  wrong.projection = orc::make("drop-first", space, orc::coordinate_map({1, 2}), orc::euclidean_distance());
  const DecompositionReport bad = verify_decomposition(o, region, wrong, opts);
  s.results()["mismatched"] = to_json(bad);
  s.check_ge("mismatched_fibers_angle", 9, bad.checks.at(0).value, 1.0);

  const AffinityReport r = assess(s, o, region, s.param("segment_length", 2.5), 10);
  s.results()["affinity"] = affinity_json(r, kernels_at(s, o, {center(region), vec({1, -2, 0.5})}));
  s.check_le("affine_residuals", 6, worst_residual(r), 1e-4);
  s.check_le("parallel", 5, r.parallel_residual, 1e-4);
}

void flat_linfty(Suite& s) {
  const auto plane = make_euclidean(2);
  s.describe_manifold(*plane);
  const Box region = box({-3, -3}, {3, 3});
  const Vec p = vec({0.0, 0.0});
  const MapOracle o = orc::make("linf-change", plane, orc::identity_map(), orc::linf_distance());
  const AffinityReport r = assess(s, o, region, s.param("segment_length", 2.5), 10);
  const std::vector<KernelReport> kernels = kernels_at(s, o, {p});
  s.results()["affinity"] = affinity_json(r, kernels);
  s.check_le("affine_residuals", 6, worst_residual(r), 1e-4);
  s.check_le("parallel", 5, r.parallel_residual, 1e-4);
  s.check_le("seminorm", 0, r.seminorm_residual, 1e-9);
  s.check_is("kernel_trivial", 0, kernels.front().dim, 0);

  const MapOracle round = orc::make("euclidean-identity", plane, orc::identity_map(), orc::euclidean_distance());
  const MetricDifferential md = metric_differential(round, {p, vec({3.0, 4.0})}, differential(s));
  s.results()["identity_differential"] = {{"value", number(md.value)}, {"residual", number(md.residual)}};
  s.check_le("identity_differential", 0, std::abs(md.value - 5.0) + md.residual, 1e-9);
  s.export_csv("linf_differential.csv", differential_norm(o, p, s.param_int("differential_grid", 180), differential(s)));
}

void negative_controls(Suite& s) {
  const auto plane = make_euclidean(2);
  const auto sphere = make_sphere();
  s.describe_manifold(*plane);
  const Box flat_region = box({-3, -3}, {3, 3});
  const MapOracle warp = orc::make("sine-warp", plane, orc::sine_warp_map(s.param("warp_amplitude", 0.3)),
                                   orc::euclidean_distance());
  const AffinityReport wr = assess(s, warp, flat_region, s.param("segment_length", 2.5), 10);
  s.results()["sine_warp"] = affinity_json(wr);
  s.check_ge("sine_warp_linearity", 6, wr.linearity_residual, 1e-2);
  s.check_is("sine_warp_verdict", 0, to_string(wr.verdict), "not_affine");

  const Box sphere_region = box({1.0, -1.0}, {2.1, 1.0});
  const MapOracle theta = orc::make("chart-theta", sphere, orc::coordinate_map({0}), orc::euclidean_distance());
  const double par = parallel_invariance_suite(theta, sphere_region, s.param_int("n_geodesics", 20),
                                               s.param_int("parallel_nodes", 4),
                                               s.param("sphere_segment_length", 0.35), s.seed(20),
                                               s.steps(), differential(s));
  s.results()["non_parallel_oracle"] = {{"parallel_residual", number(par)}};
  s.check_ge("non_parallel_oracle", 5, par, 0.05);

  const MapOracle quasi = orc::make("half-power", plane, orc::identity_map(), orc::half_power_distance());
  const OracleDefects defects = oracle_metric_defects(quasi, flat_region, 200, s.seed(30));
  const double semi = seminorm_check(quasi, vec({0.0, 0.0}), s.param_int("seminorm_pairs", 10), s.seed(31),
                                     differential(s));
  s.results()["triangle_violation"] = {{"triangle_defect", number(defects.triangle)},
                                       {"symmetry_defect", number(defects.symmetry)},
                                       {"seminorm_residual", number(semi)}};
  s.check_ge("triangle_defect_detected", 0, defects.triangle, 1e-6);
  s.check_ge("seminorm_violation_flagged", 0, semi, 1e-3);
}

void sphere_sine_warp(Suite& s) {
  const auto sphere = make_sphere();
  s.describe_manifold(*sphere);
  const Box region = box({1.0, -1.0}, {2.1, 1.0});
  const MapOracle o = orc::make("sphere-sine-warp", sphere, orc::sine_warp_map(s.param("warp_amplitude", 0.3)),
                                orc::euclidean_distance());
  const AffinityReport r = assess(s, o, region, s.param("segment_length", 0.35), 10);
  s.results()["affinity"] = affinity_json(r);
  s.check_is("verdict", 0, to_string(r.verdict), "not_affine");
}

struct Entry {
  ScenarioInfo info;
  std::function<void(Suite&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {{"flat-linfty", "Euclidean plane with the l-infinity distance: an admissible change of metric is affine"},
       flat_linfty},
      {{"sphere-transitive", "Round S^2: Gauss-Bonnet holonomy, transitive action, averaged norms are round"},
       sphere_transitive},
      {{"product-s2xr", "S^2 x R: splitting [2,1], block l1 norm, flat projection onto the line"},
       product_s2xr},
      {{"product-s2xs2", "S^2 x S^2: splitting [2,2], smoothed invariant non-Euclidean norm, sign-group section"},
       product_s2xs2},
      {{"sphere-homothety", "Identity of S^2 into the sphere of radius 2: homothety with one constant"},
       sphere_homothety},
      {{"sphere-constant", "Constant map on S^2: zero metric differential"}, sphere_constant},
      {{"mainlemma-sphere", "Symmetric difference of transported log-velocities on S^2, r -> 0"},
       [](Suite& s) {
         mainlemma(s, make_sphere(), vec({kPi / 2, 0.0}), vec({0.0, 1.0}), vec({1.0, 0.0}), true);
       }},
      {{"mainlemma-hyperbolic", "Same protocol on the hyperbolic half-plane"},
       [](Suite& s) {
         mainlemma(s, make_hyperbolic(), vec({0.0, 1.0}), vec({1.0, 0.0}), vec({0.0, 1.0}), false);
       }},
      {{"regular-corners", "Regular and non-regular vectors of the l-infinity metric differential"},
       regular_corners},
      {{"decomposition-r3-l1", "Declared factorization of R^3 -> (R^2, l1) and a mismatched control"},
       decomposition_r3_l1},
      {{"negative-controls", "Sine-warp map, chart-coordinate oracle, triangle-violating distance"},
       negative_controls},
      {{"geodesic-oracles", "Geodesics and transport against great-circle and half-plane closed forms"},
       geodesic_oracles},
      {{"sphere-sine-warp", "Non-affine warp of the sphere chart"}, sphere_sine_warp},
  };
  return list;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> list = [] {
    std::vector<ScenarioInfo> out;
    for (const Entry& e : entries()) out.push_back(e.info);
    return out;
  }();
  return list;
}

bool has_scenario(const std::string& name) {
  for (const Entry& e : entries())
    if (e.info.name == name) return true;
  return false;
}

ScenarioResult run_scenario(const std::string& name, const RunConfig& config,
                            const std::string& out_dir) {
  for (const Entry& e : entries()) {
    if (e.info.name != name) continue;
    Suite suite(name, config, out_dir);
    try {
      e.run(suite);
    } catch (const std::exception& ex) {
      suite.fail("suite_error", ex.what());
    }
    return suite.finish();
  }
  throw ArgumentError("unknown scenario: " + name);
}

std::vector<ScenarioResult> run_scenarios(const std::string& name, const RunConfig& config,
                                          const std::string& out_dir) {
  std::vector<ScenarioResult> out;
  if (name == "all") {
    for (const Entry& e : entries()) out.push_back(run_scenario(e.info.name, config, out_dir));
  } else {
    out.push_back(run_scenario(name, config, out_dir));
  }
  return out;
}

}  // namespace affgeo
