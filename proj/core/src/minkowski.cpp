#include "vh/errors.hpp"
#include "vh/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vh {

namespace {

/// Spherical cap containing the normal cone of every vertex.
struct ConeCap {
  Vec axis;
  double radius;
};

std::vector<ConeCap> vertex_cones(const Polytope& p) {
  std::vector<Vec> sum(p.vertices().size(), Vec::Zero(p.dim()));
  std::vector<std::vector<int>> incident(p.vertices().size());
  for (std::size_t f = 0; f < p.facet_count(); ++f) {
    for (int v : p.facets()[f].vertices) {
      sum[static_cast<std::size_t>(v)] += p.facets()[f].normal.vec();
      incident[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
    }
  }
  std::vector<ConeCap> out;
  out.reserve(sum.size());
  for (std::size_t v = 0; v < sum.size(); ++v) {
    if (incident[v].empty() || sum[v].norm() < 1e-12) {
      out.push_back({Vec::Zero(p.dim()), kPi});
      continue;
    }
    const Vec axis = sum[v].normalized();
    double r = 0.0;
    for (int f : incident[v]) r = std::max(r, sphere_distance(axis, p.facet(f).normal.vec()));
    out.push_back({axis, r});
  }
  return out;
}

}  // namespace

Polytope minkowski_combine(const Polytope& p, const Polytope& q, double mu) {
  if (p.dim() != q.dim()) throw ValidationError("minkowski_combine: dimension mismatch");
  if (!(mu >= 0.0 && mu <= 1.0)) throw ValidationError("minkowski_combine: mu must lie in [0, 1]");
  const auto cp = vertex_cones(p);
  const auto cq = vertex_cones(q);
  // Slack keeps pairs whose cones merely touch.
  constexpr double kSlack = 1e-9;
  std::vector<Vec> points;
  for (std::size_t i = 0; i < cp.size(); ++i) {
    for (std::size_t j = 0; j < cq.size(); ++j) {
      const double reach = cp[i].radius + cq[j].radius + kSlack;
      if (reach >= kPi || cp[i].axis.dot(cq[j].axis) >= std::cos(reach)) {
        points.push_back((1.0 - mu) * p.vertices()[i] + mu * q.vertices()[j]);
      }
    }
  }
  return convex_hull(points);
}

}  // namespace vh
