// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/affgeo.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "affgeo/affine.hpp"
#include "affgeo/holonomy.hpp"
#include "affgeo/manifolds.hpp"
#include "affgeo/norms.hpp"
#include "affgeo/oracles.hpp"
#include "affgeo/scenarios.hpp"
#include "suite.hpp"

struct affgeo_manifold {
  affgeo::ChartManifold::Ptr ptr;
};

struct affgeo_holonomy {
  affgeo::HolonomySample sample;
};

struct affgeo_norm {
  explicit affgeo_norm(affgeo::NormField q) : field(std::move(q)) {}
  affgeo::NormField field;
};

struct affgeo_oracle {
  affgeo::MapOracle oracle;
};

namespace {

using affgeo::Mat;
using affgeo::Vec;

thread_local std::string g_last_error;

affgeo_status set_error(affgeo_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

// Runs body and converts exceptions into status codes.
template <class F>
affgeo_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return AFFGEO_OK;
  } catch (const affgeo::Error& e) {
    return set_error(static_cast<affgeo_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(AFFGEO_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(AFFGEO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(AFFGEO_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(AFFGEO_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw affgeo::ArgumentError(what);
}

Vec read_vec(const double* p, int n) {
  require(p != nullptr, "null vector argument");
  return Eigen::Map<const Vec>(p, n);
}

void write_vec(const Vec& v, double* out) {
  require(out != nullptr, "null output argument");
  std::copy(v.data(), v.data() + v.size(), out);
}

void write_mat(const Mat& m, double* out) {
  require(out != nullptr, "null output argument");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
}

// Copies text into a caller buffer; reports the needed size either way.
affgeo_status write_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf == nullptr || cap < text.size() + 1)
    return set_error(AFFGEO_ERR_BUFFER, "buffer too small");
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return AFFGEO_OK;
}

const affgeo::ChartManifold& man(const affgeo_manifold* m) {
  require(m != nullptr && m->ptr != nullptr, "null manifold");
  return *m->ptr;
}

const affgeo::HolonomySample& hol(const affgeo_holonomy* h) {
  require(h != nullptr, "null holonomy sample");
  return h->sample;
}

const affgeo::NormField& nrm(const affgeo_norm* q) {
  require(q != nullptr, "null norm");
  return q->field;
}

}  // namespace

extern "C" {

const char* affgeo_version(void) { return AFFGEO_VERSION_STRING; }

const char* affgeo_last_error(void) { return g_last_error.c_str(); }

const char* affgeo_status_name(affgeo_status s) {
  switch (s) {
    case AFFGEO_OK: return "ok";
    case AFFGEO_ERR_ARGUMENT: return "argument";
    case AFFGEO_ERR_DOMAIN: return "domain";
    case AFFGEO_ERR_TRUNCATION: return "truncation";
    case AFFGEO_ERR_CONVERGENCE: return "convergence";
    case AFFGEO_ERR_SAMPLING: return "sampling";
    case AFFGEO_ERR_SEMINORM: return "seminorm";
    case AFFGEO_ERR_IO: return "io";
    case AFFGEO_ERR_INTERNAL: return "internal";
    case AFFGEO_ERR_BUFFER: return "buffer";
  }
  return "unknown";
}

// ---- manifolds --------------------------------------------------------------

affgeo_status affgeo_manifold_builtin(const char* name, int dim, double radius,
                                      affgeo_manifold** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const std::string n = name;
    affgeo::ChartManifold::Ptr p;
    if (n == "euclidean") {
      require(dim >= 1, "euclidean dimension must be positive");
      p = affgeo::make_euclidean(dim);
    } else if (n == "sphere") {
      p = affgeo::make_sphere(radius);
    } else if (n == "hyperbolic") {
      p = affgeo::make_hyperbolic(radius);
    } else {
      throw affgeo::ArgumentError("unknown manifold " + n);
    }
    *out = new affgeo_manifold{std::move(p)};
  });
}

affgeo_status affgeo_manifold_product(const affgeo_manifold* const* factors, size_t n_factors,
                                      affgeo_manifold** out) {
  return guarded([&] {
    require(factors != nullptr && out != nullptr && n_factors > 0, "empty product");
    std::vector<affgeo::ChartManifold::Ptr> list;
    for (size_t i = 0; i < n_factors; ++i) {
      man(factors[i]);
      list.push_back(factors[i]->ptr);
    }
    *out = new affgeo_manifold{affgeo::make_product(list)};
  });
}

affgeo_status affgeo_manifold_from_json(const char* json, affgeo_manifold** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new affgeo_manifold{affgeo::manifold_from_json(json)};
  });
}

affgeo_status affgeo_manifold_from_file(const char* path, affgeo_manifold** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    std::ifstream f(path);
    if (!f) throw affgeo::IoError(std::string("cannot open ") + path);
    std::stringstream ss;
    ss << f.rdbuf();
    *out = new affgeo_manifold{affgeo::manifold_from_json(ss.str())};
  });
}

void affgeo_manifold_free(affgeo_manifold* m) { delete m; }

int affgeo_manifold_dim(const affgeo_manifold* m) {
  return m && m->ptr ? m->ptr->dim() : 0;
}

double affgeo_manifold_convexity_radius(const affgeo_manifold* m) {
  return m && m->ptr ? m->ptr->convexity_radius() : 0.0;
}

affgeo_status affgeo_metric(const affgeo_manifold* m, const double* x, double* g) {
  return guarded([&] {
    const auto& M = man(m);
    write_mat(M.metric(read_vec(x, M.dim())), g);
  });
}

affgeo_status affgeo_christoffel(const affgeo_manifold* m, const double* x, double* gamma) {
  return guarded([&] {
    const auto& M = man(m);
    require(gamma != nullptr, "null output argument");
    const int n = M.dim();
    const affgeo::ChristoffelSymbols c = affgeo::christoffel(M, read_vec(x, n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gamma[(k * n + i) * n + j] = c(k, i, j);
  });
}

affgeo_status affgeo_geodesic(const affgeo_manifold* m, const double* x, const double* v,
                              double t_end, int steps, double* x_out, double* v_out) {
  return guarded([&] {
    const auto& M = man(m);
    require(steps >= 1, "steps must be positive");
    const int n = M.dim();
    const affgeo::GeodesicEnd e =
        affgeo::flow_geodesic(M, read_vec(x, n), read_vec(v, n), Mat(n, 0), t_end, steps);
    if (x_out) write_vec(e.x, x_out);
    if (v_out) write_vec(e.velocity, v_out);
  });
}

affgeo_status affgeo_transport(const affgeo_manifold* m, const double* x, const double* v,
                               const double* w, double t_end, int steps, double* w_out) {
  return guarded([&] {
    const auto& M = man(m);
    require(steps >= 1, "steps must be positive");
    const int n = M.dim();
    Mat carried = read_vec(w, n);
    const affgeo::GeodesicEnd e =
        affgeo::flow_geodesic(M, read_vec(x, n), read_vec(v, n), carried, t_end, steps);
    write_vec(e.transported.col(0), w_out);
  });
}

affgeo_status affgeo_exp(const affgeo_manifold* m, const double* p, const double* v, int steps,
                         double* x_out) {
  return guarded([&] {
    const auto& M = man(m);
    require(steps >= 1, "steps must be positive");
    write_vec(affgeo::exp_map(M, read_vec(p, M.dim()), read_vec(v, M.dim()), steps), x_out);
  });
}

affgeo_status affgeo_log(const affgeo_manifold* m, const double* p, const double* x, double tol,
                         double* v_out) {
  return guarded([&] {
    const auto& M = man(m);
    require(tol > 0.0, "tolerance must be positive");
    const affgeo::TangentVector t =
        affgeo::riemannian_log(M, read_vec(p, M.dim()), read_vec(x, M.dim()), tol);
    write_vec(t.components, v_out);
  });
}

affgeo_status affgeo_orthonormal_frame(const affgeo_manifold* m, const double* p, double* frame) {
  return guarded([&] {
    const auto& M = man(m);
    write_mat(affgeo::orthonormal_frame(M, read_vec(p, M.dim())), frame);
  });
}

// ---- holonomy ---------------------------------------------------------------

affgeo_status affgeo_holonomy_sample(const affgeo_manifold* m, const double* p, int n_loops,
                                     double scale, uint64_t seed, affgeo_holonomy** out) {
  return guarded([&] {
    const auto& M = man(m);
    require(out != nullptr, "null output argument");
    require(n_loops >= 1 && scale > 0.0, "need n_loops >= 1 and scale > 0");
    *out = new affgeo_holonomy{
        affgeo::sample_holonomy(M, read_vec(p, M.dim()), n_loops, scale, seed)};
  });
}

affgeo_status affgeo_holonomy_closure(const affgeo_holonomy* h, int depth, double dedupe_tol,
                                      affgeo_holonomy** out) {
  return guarded([&] {
    require(out != nullptr, "null output argument");
    require(depth >= 1 && dedupe_tol > 0.0, "need depth >= 1 and dedupe_tol > 0");
    *out = new affgeo_holonomy{affgeo::group_closure(hol(h), depth, dedupe_tol)};
  });
}

void affgeo_holonomy_free(affgeo_holonomy* h) { delete h; }

size_t affgeo_holonomy_size(const affgeo_holonomy* h) {
  return h ? h->sample.elements.size() : 0;
}

int affgeo_holonomy_dim(const affgeo_holonomy* h) { return h ? h->sample.dim() : 0; }

affgeo_status affgeo_holonomy_element(const affgeo_holonomy* h, size_t index, double* a) {
  return guarded([&] {
    const auto& s = hol(h);
    require(index < s.elements.size(), "element index out of range");
    write_mat(s.elements[index], a);
  });
}

affgeo_status affgeo_holonomy_transitivity(const affgeo_holonomy* h, int n_dirs, double eps,
                                           uint64_t seed, int* transitive, double* score) {
  return guarded([&] {
    require(n_dirs >= 1 && eps > 0.0, "need n_dirs >= 1 and eps > 0");
    const affgeo::TransitivityResult r = affgeo::transitivity_test(hol(h), n_dirs, eps, seed);
    if (transitive) *transitive = r.verdict == affgeo::Transitivity::kTransitive ? 1 : 0;
    if (score) *score = r.coverage_score;
  });
}

affgeo_status affgeo_holonomy_splitting(const affgeo_holonomy* h, double tol, uint64_t seed,
                                        char* buf, size_t cap, size_t* needed) {
  std::string text;
  const affgeo_status s = guarded([&] {
    require(tol > 0.0, "tolerance must be positive");
    text = affgeo::detail::to_json(affgeo::invariant_subspaces(hol(h), tol, seed)).dump();
  });
  return s == AFFGEO_OK ? write_text(text, buf, cap, needed) : s;
}

// ---- norms ------------------------------------------------------------------

affgeo_status affgeo_norm_builtin(const char* name, int dim, int n_grid, affgeo_norm** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    require(dim >= 1 && n_grid >= 8, "need dim >= 1 and n_grid >= 8");
    const std::string n = name;
    if (n == "euclidean")
      *out = new affgeo_norm(affgeo::euclidean_norm(dim, n_grid));
    else if (n == "linf")
      *out = new affgeo_norm(affgeo::linf_norm(dim, n_grid));
    else if (n == "l1")
      *out = new affgeo_norm(affgeo::l1_norm(dim, n_grid));
    else
      throw affgeo::ArgumentError("unknown norm " + n);
  });
}

void affgeo_norm_free(affgeo_norm* q) { delete q; }

int affgeo_norm_dim(const affgeo_norm* q) { return q ? q->field.dim() : 0; }

affgeo_status affgeo_norm_eval(const affgeo_norm* q, const double* v, double* value) {
  return guarded([&] {
    const auto& Q = nrm(q);
    require(value != nullptr, "null output argument");
    *value = Q(read_vec(v, Q.dim()));
  });
}

affgeo_status affgeo_norm_distance(const affgeo_norm* a, const affgeo_norm* b, double* distance) {
  return guarded([&] {
    require(distance != nullptr, "null output argument");
    *distance = affgeo::norm_distance(nrm(a), nrm(b));
  });
}

affgeo_status affgeo_norm_distance_to_euclidean(const affgeo_norm* q, double* distance) {
  return guarded([&] {
    require(distance != nullptr, "null output argument");
    *distance = affgeo::distance_to_euclidean(nrm(q));
  });
}

affgeo_status affgeo_norm_average(const affgeo_norm* q, const affgeo_holonomy* h,
                                  affgeo_norm** out) {
  return guarded([&] {
    require(out != nullptr, "null output argument");
    *out = new affgeo_norm(affgeo::average_norm(nrm(q), hol(h)));
  });
}

affgeo_status affgeo_norm_invariance_residual(const affgeo_norm* q, const affgeo_holonomy* h,
                                              double* residual) {
  return guarded([&] {
    require(residual != nullptr, "null output argument");
    *residual = affgeo::invariance_residual(nrm(q), hol(h));
  });
}

affgeo_status affgeo_norm_orbit_hull(const affgeo_holonomy* h, const double* seed, int n_grid,
                                     affgeo_norm** out) {
  return guarded([&] {
    const auto& s = hol(h);
    require(out != nullptr, "null output argument");
    *out = new affgeo_norm(affgeo::orbit_hull_norm(s, read_vec(seed, s.dim()), n_grid));
  });
}

affgeo_status affgeo_norm_smooth(const affgeo_norm* q, double eps, affgeo_norm** out,
                                 double* distance) {
  return guarded([&] {
    require(out != nullptr, "null output argument");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    affgeo::SmoothedNorm s = affgeo::minkowski_smooth(nrm(q), eps);
    if (distance) *distance = s.distance;
    *out = new affgeo_norm(std::move(s.norm));
  });
}

affgeo_status affgeo_norm_minkowski_check(const affgeo_norm* q, int n_probe, uint64_t seed,
                                          double* hessian_min_eigen, double* smooth_residual,
                                          int* minkowski) {
  return guarded([&] {
    require(n_probe >= 1, "n_probe must be positive");
    const affgeo::MinkowskiReport r = affgeo::minkowski_check(nrm(q), n_probe, seed);
    if (hessian_min_eigen) *hessian_min_eigen = r.hessian_min_eigen;
    if (smooth_residual) *smooth_residual = r.smooth_residual;
    if (minkowski) *minkowski = r.minkowski ? 1 : 0;
  });
}

affgeo_status affgeo_norm_export_csv(const affgeo_norm* q, const char* path) {
  return guarded([&] {
    require(path != nullptr, "null path");
    affgeo::export_grid_csv(nrm(q), path);
  });
}

// ---- map oracles ------------------------------------------------------------

affgeo_status affgeo_oracle_create(const affgeo_manifold* m, int label_dim,
                                   affgeo_point_map_fn map, affgeo_distance_fn distance,
                                   void* ctx, affgeo_oracle** out) {
  return guarded([&] {
    const auto& M = man(m);
    require(out != nullptr && map != nullptr && distance != nullptr, "null argument");
    require(label_dim >= 1, "label_dim must be positive");
    affgeo::MapOracle o;
    o.name = "callback";
    o.source = m->ptr;
    o.serial = true;
    const int n = M.dim();
    o.point_map = [map, ctx, n, label_dim](const Vec& x) {
      require(x.size() == n, "point of wrong dimension");
      Vec label(label_dim);
      if (map(ctx, x.data(), label.data()) != 0)
        throw affgeo::DomainError("point map callback failed");
      return label;
    };
    o.distance = [distance, ctx](const Vec& a, const Vec& b) {
      const double d = distance(ctx, a.data(), b.data());
      if (!(d >= 0.0)) throw affgeo::DomainError("distance callback failed");
      return d;
    };
    *out = new affgeo_oracle{std::move(o)};
  });
}

affgeo_status affgeo_oracle_identity(const affgeo_manifold* m, const char* distance,
                                     affgeo_oracle** out) {
  return guarded([&] {
    man(m);
    require(distance != nullptr && out != nullptr, "null argument");
    const std::string d = distance;
    namespace ao = affgeo::oracles;
    ao::DistanceFn fn;
    if (d == "euclidean")
      fn = ao::euclidean_distance();
    else if (d == "linf")
      fn = ao::linf_distance();
    else if (d == "l1")
      fn = ao::l1_distance();
    else if (d == "great-circle")
      fn = ao::great_circle_distance();
    else if (d == "hyperbolic")
      fn = ao::hyperbolic_distance();
    else
      throw affgeo::ArgumentError("unknown distance " + d);
    *out = new affgeo_oracle{ao::make("identity/" + d, m->ptr, ao::identity_map(), fn)};
  });
}

void affgeo_oracle_free(affgeo_oracle* o) { delete o; }

affgeo_status affgeo_metric_differential(const affgeo_oracle* o, const double* p, const double* v,
                                         double* value, double* residual) {
  return guarded([&] {
    require(o != nullptr, "null oracle");
    const int n = o->oracle.source->dim();
    const affgeo::MetricDifferential d =
        affgeo::metric_differential(o->oracle, {read_vec(p, n), read_vec(v, n)});
    if (value) *value = d.value;
    if (residual) *residual = d.residual;
  });
}

affgeo_status affgeo_affinity(const affgeo_oracle* o, const double* lo, const double* hi,
                              int n_geodesics, uint64_t seed, char* buf, size_t cap,
                              size_t* needed) {
  std::string text;
  const affgeo_status s = guarded([&] {
    require(o != nullptr, "null oracle");
    require(n_geodesics >= 1, "n_geodesics must be positive");
    const int n = o->oracle.source->dim();
    const affgeo::Box region{read_vec(lo, n), read_vec(hi, n)};
    affgeo::AffinityReport r = affgeo::affinity_test(o->oracle, region, n_geodesics, seed);
    r.seminorm_residual =
        affgeo::seminorm_check(o->oracle, (region.lo + region.hi) / 2, 10, seed + 1);
    r.parallel_residual = affgeo::parallel_invariance_suite(o->oracle, region, n_geodesics, 4,
                                                            r.segment_length, seed + 2);
    affgeo::classify(r);
    text = affgeo::detail::to_json(r).dump();
  });
  return s == AFFGEO_OK ? write_text(text, buf, cap, needed) : s;
}

// ---- scenarios --------------------------------------------------------------

void affgeo_run_config_init(affgeo_run_config* cfg) {
  if (!cfg) return;
  cfg->seed = 0;
  cfg->use_seed = 0;
  cfg->steps = 0;
  cfg->grid = 0;
  cfg->config_json = nullptr;
}

size_t affgeo_scenario_count(void) { return affgeo::scenario_catalog().size(); }

const char* affgeo_scenario_name(size_t index) {
  const auto& c = affgeo::scenario_catalog();
  return index < c.size() ? c[index].name.c_str() : nullptr;
}

const char* affgeo_scenario_description(size_t index) {
  const auto& c = affgeo::scenario_catalog();
  return index < c.size() ? c[index].description.c_str() : nullptr;
}

affgeo_status affgeo_run(const char* scenario, const char* out_dir, const affgeo_run_config* cfg,
                         int* failed) {
  return guarded([&] {
    require(scenario != nullptr && out_dir != nullptr, "null argument");
    affgeo::RunConfig rc;
    if (cfg && cfg->config_json) rc = affgeo::run_config_from_json(cfg->config_json);
    if (cfg && cfg->use_seed) rc.seed = cfg->seed;
    if (cfg && cfg->steps > 0) rc.steps = cfg->steps;
    if (cfg && cfg->grid > 0) rc.grid = cfg->grid;
    require(rc.steps >= 1 && rc.grid >= 8, "need steps >= 1 and grid >= 8");
    const std::vector<affgeo::ScenarioResult> results =
        affgeo::run_scenarios(scenario, rc, out_dir);
    int bad = 0;
    for (const auto& r : results) bad += r.passed ? 0 : 1;
    if (failed) *failed = bad;
  });
}

affgeo_status affgeo_merge_reports(const char* dir, const char* out_path, int* all_passed) {
  return guarded([&] {
    require(dir != nullptr && out_path != nullptr, "null argument");
    const nlohmann::json merged = affgeo::merge_reports(dir);
    std::ofstream f(out_path);
    if (!f) throw affgeo::IoError(std::string("cannot write ") + out_path);
    f << merged.dump(2) << '\n';
    if (!f) throw affgeo::IoError(std::string("write failed for ") + out_path);
    if (all_passed) *all_passed = merged.value("passed", false) ? 1 : 0;
  });
}

}  // extern "C"
