// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "affgeo/manifolds.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

namespace affgeo {

namespace {

using nlohmann::json;

Box uniform_box(int dim, double lo, double hi) {
  return {Vec::Constant(dim, lo), Vec::Constant(dim, hi)};
}

ChartManifold::Ptr rebuild(const ChartManifold::Ptr& m, Box domain,
                           double convexity_radius) {
  if (m->christoffel_mode() == ChristoffelMode::kFiniteDifference) {
    return ChartManifold::finite_difference(
        m->name(), m->dim(), [m](const Vec& x) { return m->metric(x); },
        std::move(domain), convexity_radius, m->h_fd());
  }
  return ChartManifold::analytic(
      m->name(), m->dim(), [m](const Vec& x) { return m->metric(x); },
      [m](const Vec& x) { return m->metric_derivative(x); }, std::move(domain),
      convexity_radius);
}

ChartManifold::Ptr metric_from_json(const json& spec) {
  const std::string name = spec.at("name").get<std::string>();
  if (name == "euclidean") return make_euclidean(spec.value("dim", 2));
  if (name == "sphere") return make_sphere(spec.value("radius", 1.0));
  if (name == "hyperbolic") return make_hyperbolic(spec.value("radius", 1.0));
  if (name == "product") {
    std::vector<ChartManifold::Ptr> factors;
    for (const json& f : spec.at("factors")) factors.push_back(metric_from_json(f));
    return make_product(factors);
  }
  throw ArgumentError("unknown built-in metric '" + name + "'");
}

}  // namespace

ChartManifold::Ptr make_euclidean(int dim) {
  return ChartManifold::analytic(
      "euclidean", dim, [dim](const Vec&) { return Mat(Mat::Identity(dim, dim)); },
      [dim](const Vec&) {
        return std::vector<Mat>(static_cast<size_t>(dim), Mat::Zero(dim, dim));
      },
      uniform_box(dim, -10.0, 10.0), 5.0);
}

ChartManifold::Ptr make_sphere(double radius) {
  if (!(radius > 0.0)) throw ArgumentError("sphere radius must be positive");
  const double r2 = radius * radius;
  Box domain{Vec(2), Vec(2)};
  domain.lo << 0.2, -4.0;
  domain.hi << std::numbers::pi - 0.2, 4.0;
  return ChartManifold::analytic(
      "sphere", 2,
      [r2](const Vec& x) {
        Mat g = Mat::Zero(2, 2);
        const double s = std::sin(x[0]);
        g(0, 0) = r2;
        g(1, 1) = r2 * s * s;
        return g;
      },
      [r2](const Vec& x) {
        std::vector<Mat> dg(2, Mat::Zero(2, 2));
        dg[0](1, 1) = 2.0 * r2 * std::sin(x[0]) * std::cos(x[0]);
        return dg;
      },
      std::move(domain), 0.7 * radius);
}

ChartManifold::Ptr make_hyperbolic(double radius) {
  if (!(radius > 0.0)) throw ArgumentError("hyperbolic radius must be positive");
  const double r2 = radius * radius;
  Box domain{Vec(2), Vec(2)};
  domain.lo << -10.0, 0.05;
  domain.hi << 10.0, 20.0;
  return ChartManifold::analytic(
      "hyperbolic", 2,
      [r2](const Vec& x) {
        return Mat(Mat::Identity(2, 2) * (r2 / (x[1] * x[1])));
      },
      [r2](const Vec& x) {
        std::vector<Mat> dg(2, Mat::Zero(2, 2));
        dg[1] = Mat::Identity(2, 2) * (-2.0 * r2 / (x[1] * x[1] * x[1]));
        return dg;
      },
      std::move(domain), 0.7 * radius);
}

ChartManifold::Ptr make_product(const std::vector<ChartManifold::Ptr>& factors) {
  if (factors.empty()) throw ArgumentError("product needs at least one factor");
  int dim = 0;
  std::string name;
  double radius = factors.front()->convexity_radius();
  std::vector<int> offsets;
  for (const auto& f : factors) {
    offsets.push_back(dim);
    dim += f->dim();
    name += (name.empty() ? "" : "x") + f->name();
    radius = std::min(radius, f->convexity_radius());
  }
  Box domain{Vec(dim), Vec(dim)};
  for (size_t i = 0; i < factors.size(); ++i) {
    domain.lo.segment(offsets[i], factors[i]->dim()) = factors[i]->domain().lo;
    domain.hi.segment(offsets[i], factors[i]->dim()) = factors[i]->domain().hi;
  }
  auto metric = [factors, offsets, dim](const Vec& x) {
    Mat g = Mat::Zero(dim, dim);
    for (size_t i = 0; i < factors.size(); ++i) {
      const int o = offsets[i], d = factors[i]->dim();
      g.block(o, o, d, d) = factors[i]->metric(x.segment(o, d));
    }
    return g;
  };
  auto derivative = [factors, offsets, dim](const Vec& x) {
    std::vector<Mat> dg(static_cast<size_t>(dim), Mat::Zero(dim, dim));
    for (size_t i = 0; i < factors.size(); ++i) {
      const int o = offsets[i], d = factors[i]->dim();
      const std::vector<Mat> local = factors[i]->metric_derivative(x.segment(o, d));
      for (int l = 0; l < d; ++l) dg[static_cast<size_t>(o + l)].block(o, o, d, d) = local[static_cast<size_t>(l)];
    }
    return dg;
  };
  return ChartManifold::analytic(name, dim, metric, derivative, std::move(domain),
                                 radius);
}

ChartManifold::Ptr with_finite_differences(const ChartManifold::Ptr& m,
                                           double h_fd) {
  return ChartManifold::finite_difference(
      m->name(), m->dim(), [m](const Vec& x) { return m->metric(x); },
      m->domain(), m->convexity_radius(), h_fd);
}

ChartManifold::Ptr manifold_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("manifold config is not valid JSON: ") + e.what());
  }
  try {
    ChartManifold::Ptr m = metric_from_json(doc.at("metric"));
    if (doc.contains("dim") && doc["dim"].get<int>() != m->dim())
      throw ArgumentError("config dim does not match the metric dimension");
    Box domain = m->domain();
    if (doc.contains("domain")) {
      const auto lo = doc["domain"].at("lo").get<std::vector<double>>();
      const auto hi = doc["domain"].at("hi").get<std::vector<double>>();
      if (static_cast<int>(lo.size()) != m->dim() || static_cast<int>(hi.size()) != m->dim())
        throw ArgumentError("config domain has the wrong dimension");
      domain.lo = Eigen::Map<const Vec>(lo.data(), m->dim());
      domain.hi = Eigen::Map<const Vec>(hi.data(), m->dim());
    }
    const double radius = doc.value("convexity_radius", m->convexity_radius());
    m = rebuild(m, domain, radius);
    if (doc.contains("h_fd")) m = with_finite_differences(m, doc["h_fd"].get<double>());
    return m;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("manifold config: ") + e.what());
  }
}

std::vector<std::string> builtin_metric_names() {
  return {"euclidean", "sphere", "hyperbolic", "product"};
}

}  // namespace affgeo
