/* Copyright 2026 The affgeo Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of libaffgeo. Objects are opaque handles released with the
 * matching *_free function. Every fallible call returns an affgeo_status;
 * on failure affgeo_last_error() describes the problem for the calling thread.
 * Vectors are dense double arrays of the manifold dimension; matrices are
 * row-major.
 */
#ifndef AFFGEO_AFFGEO_H
#define AFFGEO_AFFGEO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(AFFGEO_BUILDING)
#define AFFGEO_API __declspec(dllexport)
#else
#define AFFGEO_API __declspec(dllimport)
#endif
#else
#define AFFGEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum affgeo_status {
  AFFGEO_OK = 0,
  AFFGEO_ERR_ARGUMENT = 1,
  AFFGEO_ERR_DOMAIN = 2,
  AFFGEO_ERR_TRUNCATION = 3,
  AFFGEO_ERR_CONVERGENCE = 4,
  AFFGEO_ERR_SAMPLING = 5,
  AFFGEO_ERR_SEMINORM = 6,
  AFFGEO_ERR_IO = 7,
  AFFGEO_ERR_INTERNAL = 8,
  /* Output buffer too small; the required size was reported. */
  AFFGEO_ERR_BUFFER = 9
} affgeo_status;

typedef struct affgeo_manifold affgeo_manifold;
typedef struct affgeo_holonomy affgeo_holonomy;
typedef struct affgeo_norm affgeo_norm;
typedef struct affgeo_oracle affgeo_oracle;

AFFGEO_API const char* affgeo_version(void);
AFFGEO_API const char* affgeo_last_error(void);
AFFGEO_API const char* affgeo_status_name(affgeo_status status);

/* ---- manifolds ---------------------------------------------------------- */

/* name: "euclidean" (uses dim), "sphere" or "hyperbolic" (use radius). */
AFFGEO_API affgeo_status affgeo_manifold_builtin(const char* name, int dim, double radius,
                                                 affgeo_manifold** out);
AFFGEO_API affgeo_status affgeo_manifold_product(const affgeo_manifold* const* factors,
                                                 size_t n_factors, affgeo_manifold** out);
/* JSON document with "metric", optional "dim", "domain", "h_fd", "convexity_radius". */
AFFGEO_API affgeo_status affgeo_manifold_from_json(const char* json, affgeo_manifold** out);
AFFGEO_API affgeo_status affgeo_manifold_from_file(const char* path, affgeo_manifold** out);
AFFGEO_API void affgeo_manifold_free(affgeo_manifold* m);
AFFGEO_API int affgeo_manifold_dim(const affgeo_manifold* m);
AFFGEO_API double affgeo_manifold_convexity_radius(const affgeo_manifold* m);

/* g(x), dim x dim. */
AFFGEO_API affgeo_status affgeo_metric(const affgeo_manifold* m, const double* x, double* g);
/* Gamma^k_ij at out[(k * dim + i) * dim + j]. */
AFFGEO_API affgeo_status affgeo_christoffel(const affgeo_manifold* m, const double* x,
                                            double* gamma);
/* Endpoint and velocity of the geodesic with initial velocity v after t_end. */
AFFGEO_API affgeo_status affgeo_geodesic(const affgeo_manifold* m, const double* x,
                                         const double* v, double t_end, int steps,
                                         double* x_out, double* v_out);
/* Parallel transport of w along the geodesic (x, v) up to t_end. */
AFFGEO_API affgeo_status affgeo_transport(const affgeo_manifold* m, const double* x,
                                          const double* v, const double* w, double t_end,
                                          int steps, double* w_out);
AFFGEO_API affgeo_status affgeo_exp(const affgeo_manifold* m, const double* p,
                                    const double* v, int steps, double* x_out);
AFFGEO_API affgeo_status affgeo_log(const affgeo_manifold* m, const double* p,
                                    const double* x, double tol, double* v_out);
/* Columns are a g_p-orthonormal basis. */
AFFGEO_API affgeo_status affgeo_orthonormal_frame(const affgeo_manifold* m, const double* p,
                                                  double* frame);

/* ---- holonomy ----------------------------------------------------------- */

AFFGEO_API affgeo_status affgeo_holonomy_sample(const affgeo_manifold* m, const double* p,
                                                int n_loops, double scale, uint64_t seed,
                                                affgeo_holonomy** out);
AFFGEO_API affgeo_status affgeo_holonomy_closure(const affgeo_holonomy* h, int depth,
                                                 double dedupe_tol, affgeo_holonomy** out);
AFFGEO_API void affgeo_holonomy_free(affgeo_holonomy* h);
AFFGEO_API size_t affgeo_holonomy_size(const affgeo_holonomy* h);
AFFGEO_API int affgeo_holonomy_dim(const affgeo_holonomy* h);
AFFGEO_API affgeo_status affgeo_holonomy_element(const affgeo_holonomy* h, size_t index,
                                                 double* a);
AFFGEO_API affgeo_status affgeo_holonomy_transitivity(const affgeo_holonomy* h, int n_dirs,
                                                      double eps, uint64_t seed,
                                                      int* transitive, double* score);
/* SplittingReport as JSON into buf (capacity cap); *needed gets the size
 * including the terminating zero. */
AFFGEO_API affgeo_status affgeo_holonomy_splitting(const affgeo_holonomy* h, double tol,
                                                   uint64_t seed, char* buf, size_t cap,
                                                   size_t* needed);

/* ---- norms -------------------------------------------------------------- */

/* name: "euclidean", "linf" or "l1". */
AFFGEO_API affgeo_status affgeo_norm_builtin(const char* name, int dim, int n_grid,
                                             affgeo_norm** out);
AFFGEO_API void affgeo_norm_free(affgeo_norm* q);
AFFGEO_API int affgeo_norm_dim(const affgeo_norm* q);
AFFGEO_API affgeo_status affgeo_norm_eval(const affgeo_norm* q, const double* v, double* value);
AFFGEO_API affgeo_status affgeo_norm_distance(const affgeo_norm* a, const affgeo_norm* b,
                                              double* distance);
AFFGEO_API affgeo_status affgeo_norm_distance_to_euclidean(const affgeo_norm* q,
                                                           double* distance);
AFFGEO_API affgeo_status affgeo_norm_average(const affgeo_norm* q, const affgeo_holonomy* h,
                                             affgeo_norm** out);
AFFGEO_API affgeo_status affgeo_norm_invariance_residual(const affgeo_norm* q,
                                                         const affgeo_holonomy* h,
                                                         double* residual);
AFFGEO_API affgeo_status affgeo_norm_orbit_hull(const affgeo_holonomy* h, const double* seed,
                                                int n_grid, affgeo_norm** out);
AFFGEO_API affgeo_status affgeo_norm_smooth(const affgeo_norm* q, double eps,
                                            affgeo_norm** out, double* distance);
AFFGEO_API affgeo_status affgeo_norm_minkowski_check(const affgeo_norm* q, int n_probe,
                                                     uint64_t seed, double* hessian_min_eigen,
                                                     double* smooth_residual, int* minkowski);
AFFGEO_API affgeo_status affgeo_norm_export_csv(const affgeo_norm* q, const char* path);

/* ---- map oracles -------------------------------------------------------- */

/* Writes the image of x (label_dim values) to label; returns 0 on success. */
typedef int (*affgeo_point_map_fn)(void* ctx, const double* x, double* label);
/* Distance between two labels; a negative return signals failure. */
typedef double (*affgeo_distance_fn)(void* ctx, const double* a, const double* b);

/* The callbacks must stay valid, and ctx alive, until the oracle is freed. */
AFFGEO_API affgeo_status affgeo_oracle_create(const affgeo_manifold* m, int label_dim,
                                              affgeo_point_map_fn map, affgeo_distance_fn distance,
                                              void* ctx, affgeo_oracle** out);
/* Identity map into the named distance on chart coordinates:
 * "euclidean", "linf", "l1", "great-circle", "hyperbolic". */
AFFGEO_API affgeo_status affgeo_oracle_identity(const affgeo_manifold* m, const char* distance,
                                                affgeo_oracle** out);
AFFGEO_API void affgeo_oracle_free(affgeo_oracle* o);
AFFGEO_API affgeo_status affgeo_metric_differential(const affgeo_oracle* o, const double* p,
                                                    const double* v, double* value,
                                                    double* residual);
/* AffinityReport (linearity, seminorm and parallel residuals) as JSON. */
AFFGEO_API affgeo_status affgeo_affinity(const affgeo_oracle* o, const double* lo,
                                         const double* hi, int n_geodesics, uint64_t seed,
                                         char* buf, size_t cap, size_t* needed);

/* ---- scenarios ---------------------------------------------------------- */

/* Unset fields (use_seed == 0, steps or grid <= 0) fall back to the value in
 * config_json, then to the built-in defaults (seed 1, 64 steps, grid 720). */
typedef struct affgeo_run_config {
  uint64_t seed;
  int use_seed;
  int steps;
  int grid;
  /* Optional JSON run config ({"scenarios": {...}}); NULL for none. */
  const char* config_json;
} affgeo_run_config;

AFFGEO_API void affgeo_run_config_init(affgeo_run_config* cfg);
AFFGEO_API size_t affgeo_scenario_count(void);
AFFGEO_API const char* affgeo_scenario_name(size_t index);
AFFGEO_API const char* affgeo_scenario_description(size_t index);
/* Runs one scenario or "all", writing reports below out_dir. *failed counts
 * scenarios with at least one failed assertion. */
AFFGEO_API affgeo_status affgeo_run(const char* scenario, const char* out_dir,
                                    const affgeo_run_config* cfg, int* failed);
/* Merges out_dir/<scenario>/report.json into out_path; *all_passed is set. */
AFFGEO_API affgeo_status affgeo_merge_reports(const char* dir, const char* out_path,
                                              int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* AFFGEO_AFFGEO_H */
