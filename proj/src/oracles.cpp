// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/oracles.hpp"

#include <cmath>
#include <utility>

namespace affgeo::oracles {

namespace {

Eigen::Vector3d embed(const PointLabel& a) {
  return {std::sin(a[0]) * std::cos(a[1]), std::sin(a[0]) * std::sin(a[1]),
          std::cos(a[0])};
}

}  // namespace

DistanceFn euclidean_distance() {
  return [](const PointLabel& a, const PointLabel& b) { return (a - b).norm(); };
}

DistanceFn linf_distance() {
  return [](const PointLabel& a, const PointLabel& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
  };
}

DistanceFn l1_distance() {
  return [](const PointLabel& a, const PointLabel& b) { return (a - b).lpNorm<1>(); };
}

DistanceFn half_power_distance() {
  return [](const PointLabel& a, const PointLabel& b) {
    const double s = (a - b).cwiseAbs().cwiseSqrt().sum();
    return s * s;
  };
}

DistanceFn scaled_distance(DistanceFn d, double factor) {
  return [d = std::move(d), factor](const PointLabel& a, const PointLabel& b) {
    return factor * d(a, b);
  };
}

DistanceFn great_circle_distance(double radius) {
  return [radius](const PointLabel& a, const PointLabel& b) {
    const Eigen::Vector3d u = embed(a), v = embed(b);
    return radius * std::atan2(u.cross(v).norm(), u.dot(v));
  };
}

DistanceFn hyperbolic_distance(double radius) {
  return [radius](const PointLabel& a, const PointLabel& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1];
    const double s = std::sqrt((dx * dx + dy * dy) / (4.0 * a[1] * b[1]));
    return 2.0 * radius * std::asinh(s);
  };
}

DistanceFn product_distance(std::vector<FactorDistance> factors, bool l1) {
  return [factors = std::move(factors), l1](const PointLabel& a, const PointLabel& b) {
    double total = 0.0;
    for (const FactorDistance& f : factors) {
      const double d = f.distance(a.segment(f.offset, f.size), b.segment(f.offset, f.size));
      total += l1 ? d : d * d;
    }
    return l1 ? total : std::sqrt(total);
  };
}

PointMapFn identity_map() {
  return [](const Vec& x) { return PointLabel(x); };
}

PointMapFn coordinate_map(std::vector<int> indices) {
  return [indices = std::move(indices)](const Vec& x) {
    PointLabel y(static_cast<Eigen::Index>(indices.size()));
    for (size_t i = 0; i < indices.size(); ++i)
      y[static_cast<Eigen::Index>(i)] = x[indices[i]];
    return y;
  };
}

PointMapFn constant_map(Vec value) {
  return [value = std::move(value)](const Vec&) { return PointLabel(value); };
}

PointMapFn sine_warp_map(double amplitude) {
  return [amplitude](const Vec& x) {
    PointLabel y = x;
    y[0] += amplitude * std::sin(x[1]);
    return y;
  };
}

MapOracle make(std::string name, ChartManifold::Ptr source, PointMapFn map,
               DistanceFn distance) {
  MapOracle o;
  o.name = std::move(name);
  o.source = std::move(source);
  o.point_map = std::move(map);
  o.distance = std::move(distance);
  return o;
}

}  // namespace affgeo::oracles
