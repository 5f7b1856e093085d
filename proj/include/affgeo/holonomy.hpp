// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "affgeo/geometry.hpp"

namespace affgeo {

// Geodesic triangle p -> q1 -> q2 -> p that generated one holonomy element.
struct LoopRecord {
  std::vector<Vec> vertices;
  // Rotation angle of the element when dim == 2, NaN otherwise.
  double angle = 0.0;
};

// Finite sample of the holonomy group at `base`, written in the orthonormal
// frame `frame` (so every element is an orthogonal matrix).
struct HolonomySample {
  Vec base;
  Mat frame;
  std::vector<Mat> elements;
  // loops[i] generated elements[i]; empty records for the identity and for
  // products created by group_closure.
  std::vector<LoopRecord> loops;
  int generation_depth = 1;

  int dim() const { return static_cast<int>(frame.cols()); }
  // max ||A^T A - I||_F over the elements.
  double orthogonality_residual() const;
};

struct SamplingOptions {
  int steps = 64;
  double log_tol = 1e-12;
  int max_retries = 20;
};

HolonomySample sample_holonomy(const ChartManifold& m, const Vec& p,
                               int n_loops, double scale, std::uint64_t seed,
                               const SamplingOptions& opts = {});

// Holonomy of a single triangle p -> q1 -> q2 -> p, in the frame at p.
Mat triangle_holonomy(const ChartManifold& m, const Vec& p, const Vec& q1,
                      const Vec& q2, const Mat& frame,
                      const SamplingOptions& opts = {});

// Adds all products of at most `depth` sample elements (and their inverses),
// deduplicated at Frobenius distance `dedupe_tol`; stops growing at
// `max_elements`. Input elements are always kept.
HolonomySample group_closure(const HolonomySample& s, int depth,
                             double dedupe_tol = 1e-6,
                             size_t max_elements = 200000);

enum class Transitivity { kTransitive, kNonTransitive };

struct TransitivityResult {
  Transitivity verdict = Transitivity::kNonTransitive;
  // Largest angle between a probe direction and the orbit of +-e.
  double coverage_score = 0.0;
};

TransitivityResult transitivity_test(const HolonomySample& s, int n_dirs,
                                     double eps, std::uint64_t seed = 1);

struct SplittingReport {
  // Orthonormal bases (frame coordinates) of the non-trivial blocks followed
  // by the fixed subspace V_0 when it is non-zero.
  std::vector<Mat> subspace_bases;
  std::vector<int> block_dims;
  int fixed_dim = 0;
  // max over elements A and blocks B of ||(I - B B^T) A B||.
  double invariance_residual = 0.0;
  int commutant_dim = 0;
  bool warning = false;
};

SplittingReport invariant_subspaces(const HolonomySample& s, double tol = 1e-3,
                                    std::uint64_t seed = 1);

}  // namespace affgeo
