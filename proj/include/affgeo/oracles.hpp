// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "affgeo/affine.hpp"

namespace affgeo::oracles {

using DistanceFn = std::function<double(const PointLabel&, const PointLabel&)>;
using PointMapFn = std::function<PointLabel(const Vec&)>;

DistanceFn euclidean_distance();
DistanceFn linf_distance();
DistanceFn l1_distance();
// (sum_i |a_i - b_i|^(1/2))^2; fails the triangle inequality.
DistanceFn half_power_distance();
DistanceFn scaled_distance(DistanceFn d, double factor);
// Labels are sphere chart coordinates (theta, phi).
DistanceFn great_circle_distance(double radius = 1.0);
// Labels are half-plane coordinates (x, y).
DistanceFn hyperbolic_distance(double radius = 1.0);

// One factor of a product target: the label slice [offset, offset + size).
struct FactorDistance {
  int offset = 0;
  int size = 0;
  DistanceFn distance;
};
// Factor distances combined by the l^1 sum (l1 = true) or the l^2 sum.
DistanceFn product_distance(std::vector<FactorDistance> factors, bool l1);

PointMapFn identity_map();
PointMapFn coordinate_map(std::vector<int> indices);
PointMapFn constant_map(Vec value);
// (x0 + amplitude * sin(x1), x1, x2, ...)
PointMapFn sine_warp_map(double amplitude);

MapOracle make(std::string name, ChartManifold::Ptr source, PointMapFn map,
               DistanceFn distance);

}  // namespace affgeo::oracles
