// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

// Gauge of a centrally symmetric polytope P = conv{+-w_i} by a revised simplex
// on the dual problem
//     min 1^T y   s.t.   W y = v,  y >= 0,
// whose optimal dual vector u attains max <v, u> over the polar body.

#include <algorithm>
#include <cmath>
#include <limits>

#include "affgeo/norms.hpp"

namespace affgeo {

namespace {
constexpr double kPivotTol = 1e-12;
}

PolytopeGauge::PolytopeGauge(const std::vector<Vec>& vertices)
    : fallbacks_(std::make_shared<size_t>(0)) {
  if (vertices.empty()) throw ArgumentError("polytope gauge needs vertices");
  dim_ = static_cast<int>(vertices.front().size());
  Mat raw(dim_, static_cast<Eigen::Index>(vertices.size()));
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].size() != dim_)
      throw ArgumentError("polytope gauge: vertex dimension mismatch");
    raw.col(static_cast<Eigen::Index>(i)) = vertices[i];
  }
  Eigen::JacobiSVD<Mat> svd(raw, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  rank_ = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * std::max(smax, 1e-300)) ++rank_;
  span_ = svd.matrixU().leftCols(rank_);
  if (rank_ == 0) return;

  const Mat projected = span_.transpose() * raw;
  const Eigen::Index n = projected.cols();
  vertices_.resize(rank_, 2 * n);
  vertices_.leftCols(n) = projected;
  vertices_.rightCols(n) = -projected;

  // Greedy independent columns for the starting basis.
  Mat q(rank_, 0);
  for (Eigen::Index i = 0; i < n && static_cast<int>(start_.size()) < rank_; ++i) {
    Vec c = projected.col(i);
    for (Eigen::Index k = 0; k < q.cols(); ++k) c -= q.col(k).dot(c) * q.col(k);
    if (c.norm() > 1e-8 * std::max(1.0, projected.col(i).norm())) {
      q.conservativeResize(rank_, q.cols() + 1);
      q.col(q.cols() - 1) = c.normalized();
      start_.push_back(static_cast<int>(i));
    }
  }
}

double PolytopeGauge::operator()(const Vec& v) const {
  if (v.size() != dim_) throw ArgumentError("polytope gauge: dimension mismatch");
  if (rank_ == 0) return 0.0;
  const Vec reduced = span_.transpose() * v;
  if (reduced.norm() == 0.0) return 0.0;
  const double value = solve(reduced);
  if (std::isfinite(value)) return value;
  ++*fallbacks_;
  return grid_bound(reduced);
}

double PolytopeGauge::solve(const Vec& v) const {
  const int r = rank_;
  const Eigen::Index n = vertices_.cols();
  const Eigen::Index half = n / 2;
  std::vector<Eigen::Index> basis(start_.begin(), start_.end());
  Mat b(r, r);
  for (int k = 0; k < r; ++k) b.col(k) = vertices_.col(basis[static_cast<size_t>(k)]);
  Eigen::PartialPivLU<Mat> lu(b);
  Vec y = lu.solve(v);
  for (int k = 0; k < r; ++k) {
    if (y[k] < 0.0) {
      Eigen::Index& idx = basis[static_cast<size_t>(k)];
      idx = idx < half ? idx + half : idx - half;
      b.col(k) = -b.col(k);
      y[k] = -y[k];
    }
  }
  lu.compute(b);

  const int max_iter = 50 + 20 * static_cast<int>(n);
  bool bland = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (iter > 10 * r + 50) bland = true;
    const Vec pi = lu.transpose().solve(Vec::Ones(r));
    const Vec reduced = vertices_.transpose() * pi;
    Eigen::Index enter = -1;
    double best = 1.0 + 1e-12;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (reduced[j] > best) {
        enter = j;
        if (bland) break;
        best = reduced[j];
      }
    }
    if (enter < 0) return pi.dot(v);

    const Vec d = lu.solve(vertices_.col(enter));
    int leave = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (int k = 0; k < r; ++k) {
      if (d[k] > kPivotTol) {
        const double ratio = y[k] / d[k];
        if (ratio < theta - 1e-15 ||
            (bland && ratio <= theta + 1e-15 && leave >= 0 &&
             basis[static_cast<size_t>(k)] < basis[static_cast<size_t>(leave)])) {
          theta = ratio;
          leave = k;
        }
      }
    }
    if (leave < 0) return std::numeric_limits<double>::infinity();
    y -= theta * d;
    y[leave] = theta;
    basis[static_cast<size_t>(leave)] = enter;
    b.col(leave) = vertices_.col(enter);
    lu.compute(b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double PolytopeGauge::grid_bound(const Vec& v) const {
  // gauge(v) = sup_u <v, u> / h(u), with h the support function.
  const auto grid = sphere_grid(rank_, 720);
  double best = 0.0;
  for (const Vec& u : *grid) {
    const double h = (vertices_.transpose() * u).maxCoeff();
    if (h > 0.0) best = std::max(best, v.dot(u) / h);
  }
  return best;
}

}  // namespace affgeo
