// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "affgeo/geometry.hpp"

namespace affgeo {

// Flat R^dim on the box [-10, 10]^dim.
ChartManifold::Ptr make_euclidean(int dim);
// Round sphere of the given radius in (theta, phi) with metric
// R^2 diag(1, sin^2 theta); theta is kept inside [0.2, pi - 0.2].
ChartManifold::Ptr make_sphere(double radius = 1.0);
// Upper half-plane with metric R^2 diag(1/y^2, 1/y^2).
ChartManifold::Ptr make_hyperbolic(double radius = 1.0);
// Block-diagonal product of the factors, coordinates concatenated.
ChartManifold::Ptr make_product(const std::vector<ChartManifold::Ptr>& factors);

// Same geometry as `m` but with finite-difference Christoffels.
ChartManifold::Ptr with_finite_differences(const ChartManifold::Ptr& m,
                                           double h_fd = 0.0);

// Builds a manifold from a JSON document:
//   {"metric": {"name": "sphere" | "euclidean" | "hyperbolic" | "product",
//               "dim": n, "radius": r, "factors": [ ...metric objects... ]},
//    "dim": n, "domain": {"lo": [...], "hi": [...]}, "h_fd": h,
//    "convexity_radius": r}
// `dim`, `domain`, `h_fd` and `convexity_radius` are optional overrides.
ChartManifold::Ptr manifold_from_json(const std::string& json_text);

std::vector<std::string> builtin_metric_names();

}  // namespace affgeo
