#pragma once

// Brute-force reference computations used by the tests. They rely only on
// public data (vertex coordinates, facet vertex lists, support values) and
// deliberately avoid the library algorithms they are compared against.

#include "vh/body.hpp"
#include "vh/polytope.hpp"
#include "vh/rounded.hpp"
#include "vh/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using vh::Vec;

inline bool has_normal(const std::vector<Vec>& normals, const Vec& n, double tol = 1e-9) {
  return std::any_of(normals.begin(), normals.end(), [&](const Vec& m) { return (m - n).norm() < tol; });
}

/// Outer facet normals of conv(points) by testing every point triple (3D)
/// or pair (2D) for a supporting plane.
inline std::vector<Vec> facet_normals(const std::vector<Vec>& pts, double tol = 1e-9) {
  std::vector<Vec> out;
  const std::size_t n = pts.size();
  const int dim = static_cast<int>(pts.front().size());
  if (dim == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vec d = pts[j] - pts[i];
        if (d.norm() < 1e-12) continue;
        Vec nrm(2);
        nrm << d[1], -d[0];
        const Vec s = nrm.normalized();
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) {
          hi = std::max(hi, (p - pts[i]).dot(s));
          lo = std::min(lo, (p - pts[i]).dot(s));
        }
        if (hi < tol && !has_normal(out, s, 1e-7)) out.push_back(s);
        if (lo > -tol && !has_normal(out, Vec(-s), 1e-7)) out.push_back(-s);
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Eigen::Vector3d a = pts[i], b = pts[j], c = pts[k];
        const Eigen::Vector3d nrm = (b - a).cross(c - a);
        if (nrm.norm() < 1e-12) continue;
        const Eigen::Vector3d s = nrm.normalized();
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) {
          const double d = (Eigen::Vector3d(p) - a).dot(s);
          hi = std::max(hi, d);
          lo = std::min(lo, d);
        }
        if (hi < tol && !has_normal(out, Vec(s), 1e-7)) out.push_back(Vec(s));
        if (lo > -tol && !has_normal(out, Vec(-s), 1e-7)) out.push_back(Vec(-s));
      }
    }
  }
  return out;
}

/// Exhaustive nearest-member distance over a probe set.
inline double covering_gap(const std::vector<vh::Direction>& members, const std::vector<vh::Direction>& probes) {
  double gap = 0.0;
  for (const auto& p : probes) {
    double best = vh::kPi;
    for (const auto& m : members) best = std::min(best, std::acos(std::clamp(p.vec().dot(m.vec()), -1.0, 1.0)));
    gap = std::max(gap, best);
  }
  return gap;
}

inline std::vector<vh::Direction> uniform_probes(int dim, std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<vh::Direction> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = g(rng);
    out.emplace_back(v);
  }
  return out;
}

/// Facet adjacency recomputed from facet vertex lists: facets sharing at
/// least n - 1 vertex coordinates.
inline std::vector<std::set<int>> adjacency_from_vertices(const vh::Polytope& p) {
  const std::size_t m = p.facet_count();
  std::vector<std::set<int>> adj(m);
  const std::size_t need = static_cast<std::size_t>(p.dim() - 1);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      std::size_t shared = 0;
      for (int x : p.facets()[a].vertices) {
        for (int y : p.facets()[b].vertices) {
          shared += (p.vertices()[static_cast<std::size_t>(x)] - p.vertices()[static_cast<std::size_t>(y)]).norm() < 1e-12;
        }
      }
      if (shared >= need) {
        adj[a].insert(static_cast<int>(b));
        adj[b].insert(static_cast<int>(a));
      }
    }
  }
  return adj;
}

inline int facet_with_normal(const vh::Polytope& p, const Vec& u, double tol = 1e-7) {
  for (std::size_t f = 0; f < p.facet_count(); ++f) {
    if ((p.facets()[f].normal.vec() - u).norm() < tol) return static_cast<int>(f);
  }
  return -1;
}

struct Properties {
  bool a = true;
  bool b = true;
  bool c = true;
  bool d = true;
  double worst_symmetry = 0.0;
  double worst_gap = 0.0;
  double worst_angle = 0.0;
};

/// Reference checker of the four net properties. Adjacency comes from shared
/// vertices; tangent covering from 3600 samples of the tangent circle.
inline Properties net_properties(const vh::Polytope& p, const vh::EtaNet& net, double eta) {
  Properties r;
  const auto adj = adjacency_from_vertices(p);
  std::vector<int> net_facets;
  for (const auto& u : net.members) {
    const int f = facet_with_normal(p, u.vec());
    if (f < 0) {
      r.a = r.b = r.c = r.d = false;
      return r;
    }
    net_facets.push_back(f);
    std::vector<Vec> verts;
    for (int v : p.facets()[static_cast<std::size_t>(f)].vertices) verts.push_back(p.vertices()[static_cast<std::size_t>(v)]);
    Vec c = Vec::Zero(p.dim());
    for (const auto& v : verts) c += v;
    c /= static_cast<double>(verts.size());
    for (const auto& v : verts) {
      const Vec mirror = 2.0 * c - v;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& w : verts) best = std::min(best, (w - mirror).norm());
      r.worst_symmetry = std::max(r.worst_symmetry, best);
    }
    std::vector<Vec> tangents;
    for (int g : adj[static_cast<std::size_t>(f)]) {
      const Vec v = p.facets()[static_cast<std::size_t>(g)].normal.vec();
      r.worst_angle = std::max(r.worst_angle, std::acos(std::clamp(v.dot(u.vec()), -1.0, 1.0)));
      const Vec t = v - v.dot(u.vec()) * u.vec();
      tangents.push_back(t.normalized());
    }
    double gap = 0.0;
    if (p.dim() == 2) {
      Vec t0(2);
      t0 << -u[1], u[0];
      for (const Vec& probe : {t0, Vec(-t0)}) {
        double best = vh::kPi;
        for (const auto& t : tangents) best = std::min(best, std::acos(std::clamp(t.dot(probe), -1.0, 1.0)));
        gap = std::max(gap, best);
      }
    } else {
      Eigen::Vector3d uu = u.vec();
      Eigen::Vector3d e1 = std::abs(uu[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
      e1 = (e1 - e1.dot(uu) * uu).normalized();
      const Eigen::Vector3d e2 = uu.cross(e1);
      for (int s = 0; s < 3600; ++s) {
        const double a = 2.0 * vh::kPi * s / 3600.0;
        const Vec probe = Vec(std::cos(a) * e1 + std::sin(a) * e2);
        double best = vh::kPi;
        for (const auto& t : tangents) best = std::min(best, std::acos(std::clamp(t.dot(probe), -1.0, 1.0)));
        gap = std::max(gap, best);
      }
    }
    r.worst_gap = std::max(r.worst_gap, gap);
  }
  r.a = r.worst_symmetry <= 1e-9;
  r.b = r.worst_gap < eta;
  r.c = r.worst_angle < eta;
  for (std::size_t g = 0; g < p.facet_count(); ++g) {
    int touching = 0;
    for (int f : net_facets) touching += adj[g].count(f) > 0;
    if (touching > 1) r.d = false;
  }
  return r;
}

/// Gradient of the positively homogeneous support function by central
/// differences in R^n.
inline Vec support_gradient(const vh::Body& b, const Vec& u, double h = 1e-6) {
  Vec g(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    Vec up = u, dn = u;
    up[k] += h;
    dn[k] -= h;
    g[k] = (up.norm() * vh::support_value(b, vh::Direction(up)) - dn.norm() * vh::support_value(b, vh::Direction(dn))) /
           (2.0 * h);
  }
  return g;
}

/// Support value of a planar rounded body by radial bisection of its
/// boundary from an interior point: a scan over `rays` directions followed
/// by a ternary search around the best ray.
inline double rounded_support_2d(const vh::RoundedBody& rb, const Vec& u, const Vec& inside, int rays = 200000) {
  const auto radial = [&](double a) {
    Vec d(2);
    d << std::cos(a), std::sin(a);
    double lo = 0.0;
    double hi = 10.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (rb.max_violation(Vec(inside + mid * d)) <= 0.0 ? lo : hi) = mid;
    }
    return (inside + lo * d).dot(u);
  };
  const double step = 2.0 * vh::kPi / rays;
  double best = -std::numeric_limits<double>::infinity();
  double best_a = 0.0;
  for (int i = 0; i < rays; ++i) {
    const double v = radial(step * i);
    if (v > best) {
      best = v;
      best_a = step * i;
    }
  }
  double lo = best_a - step;
  double hi = best_a + step;
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    (radial(m1) < radial(m2) ? lo : hi) = radial(m1) < radial(m2) ? m1 : m2;
  }
  return std::max(best, radial(0.5 * (lo + hi)));
}

}  // namespace oracle
