// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "affgeo/norms.hpp"

namespace affgeo {

namespace {

std::vector<Vec> circle(int n) {
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    Vec u(2);
    u << std::cos(a), std::sin(a);
    out.push_back(u);
  }
  return out;
}

std::vector<Vec> icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[static_cast<size_t>(a)] + verts[static_cast<size_t>(b)]).normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
  std::vector<Vec> out;
  out.reserve(verts.size());
  for (const auto& v : verts) out.emplace_back(Vec(v));
  return out;
}

std::vector<Vec> build(int dim, int n_grid) {
  if (dim == 1) return {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  if (dim == 2) return circle(std::max(n_grid, 4));
  if (dim == 3) {
    const int level = std::clamp(
        static_cast<int>(std::lround(std::log2(std::max(n_grid, 1) / 45.0))), 0, 6);
    return icosphere(level);
  }
  const int m = std::max(8, n_grid / 30);
  const int polar = m / 4 + 1;
  const std::vector<Vec> head = circle(m);
  const std::vector<Vec> tail = *sphere_grid(dim - 2, m);
  std::vector<Vec> out;
  for (int k = 0; k < polar; ++k) {
    const double a = 0.5 * std::numbers::pi * k / (polar - 1);
    const double c = std::cos(a), s = std::sin(a);
    const bool only_head = k == 0, only_tail = k == polar - 1;
    for (size_t i = 0; i < (only_tail ? 1 : head.size()); ++i) {
      for (size_t j = 0; j < (only_head ? 1 : tail.size()); ++j) {
        Vec u = Vec::Zero(dim);
        if (!only_tail) u.head(2) = c * head[i];
        if (!only_head) u.tail(dim - 2) = s * tail[j];
        out.push_back(u);
      }
    }
  }
  return out;
}

}  // namespace

std::shared_ptr<const std::vector<Vec>> sphere_grid(int dim, int n_grid) {
  if (dim < 1) throw ArgumentError("sphere_grid needs dim >= 1");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<Vec>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({dim, n_grid});
    if (it != cache.end()) return it->second;
  }
  auto grid = std::make_shared<const std::vector<Vec>>(build(dim, n_grid));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(dim, n_grid), grid).first->second;
}

}  // namespace affgeo
