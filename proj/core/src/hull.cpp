#include "predicates.hpp"
#include "vh/errors.hpp"
#include "vh/polytope.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace vh {

namespace {

using V3 = Eigen::Vector3d;

double scale_of(std::span<const Vec> points) {
  double s = 1.0;
  for (const auto& p : points) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// ----------------------------------------------------------------------------
// n = 2

Polytope hull_2d(std::span<const Vec> points) {
  const double tol = kPlaneTolerance * scale_of(points);
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Vec& pa = points[static_cast<std::size_t>(a)];
    const Vec& pb = points[static_cast<std::size_t>(b)];
    return pa[0] < pb[0] || (pa[0] == pb[0] && pa[1] < pb[1]);
  });
  auto at = [&](int i) -> const Vec& { return points[static_cast<std::size_t>(i)]; };
  auto left_of = [&](int o, int a, int b) {
    return detail::orient2d(at(o).head<2>(), at(a).head<2>(), at(b).head<2>()) > 0;
  };
  // Monotone chain on exact orientations, then nearly collinear vertices
  // are merged.
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t start = hull.size();
    for (std::size_t k = 0; k < order.size(); ++k) {
      int idx = pass == 0 ? order[k] : order[order.size() - 1 - k];
      while (hull.size() >= start + 2 && !left_of(hull[hull.size() - 2], hull.back(), idx)) {
        hull.pop_back();
      }
      hull.push_back(idx);
    }
    hull.pop_back();
  }
  auto off_chord = [&](int prev, int mid, int next) {
    const Vec chord = at(next) - at(prev);
    const double len = chord.norm();
    if (len == 0.0) return false;
    const Vec r = at(mid) - at(prev);
    return (chord[0] * r[1] - chord[1] * r[0]) / len < -tol;
  };
  for (bool changed = true; changed && hull.size() > 3;) {
    changed = false;
    for (std::size_t i = 0; i < hull.size() && hull.size() > 3; ++i) {
      const std::size_t n = hull.size();
      if (!off_chord(hull[(i + n - 1) % n], hull[i], hull[(i + 1) % n])) {
        hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        --i;
      }
    }
  }
  bool flat = hull.size() < 3;
  for (std::size_t i = 0; !flat && i < hull.size(); ++i) {
    const std::size_t n = hull.size();
    flat = !off_chord(hull[(i + n - 1) % n], hull[i], hull[(i + 1) % n]);
  }
  if (flat) throw ValidationError("convex hull: degenerate (flat) point set");

  std::vector<Vec> vertices;
  for (int i : hull) vertices.push_back(at(i));
  std::vector<Facet> facets;
  const std::size_t k = vertices.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec& a = vertices[i];
    const Vec& b = vertices[(i + 1) % k];
    const Vec d = b - a;
    Direction n(make_vec({d[1], -d[0]}));
    const double offset = 0.5 * (a.dot(n.vec()) + b.dot(n.vec()));
    facets.push_back(Facet{n, offset, {static_cast<int>(i), static_cast<int>((i + 1) % k)}});
  }
  return Polytope(2, std::move(vertices), std::move(facets));
}

// ----------------------------------------------------------------------------
// n = 3

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nbr{-1, -1, -1};  // neighbor across edge (v[k], v[k+1])
  V3 n;
  double d = 0.0;
  std::vector<int> conflict;
  bool alive = true;
};

class Hull3 {
 public:
  explicit Hull3(std::span<const Vec> points)
      : tol_(kPlaneTolerance * scale_of(points)), flat_tol_(kFlatTolerance * scale_of(points)) {
    pts_.reserve(points.size());
    for (const auto& p : points) pts_.push_back(p.head<3>());
  }

  Polytope run() {
    seed_simplex();
    for (std::size_t f = 0; f < tris_.size(); ++f) {
      if (!tris_[f].alive || tris_[f].conflict.empty()) continue;
      insert_from(static_cast<int>(f));
    }
    return assemble();
  }

 private:
  double dist(const Tri& t, int p) const { return t.n.dot(pts_[static_cast<std::size_t>(p)]) - t.d; }
  /// Exact test: p lies strictly on the outer side of the plane of t.
  bool outside(const Tri& t, int p) const { return detail::orient3d(P(t.v[0]), P(t.v[1]), P(t.v[2]), P(p)) > 0; }
  const V3& P(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  void set_plane(Tri& t) const {
    const V3 c = (P(t.v[1]) - P(t.v[0])).cross(P(t.v[2]) - P(t.v[0]));
    const double len = c.norm();
    t.n = len > 0.0 ? V3(c / len) : V3::Zero();
    t.d = (t.n.dot(P(t.v[0])) + t.n.dot(P(t.v[1])) + t.n.dot(P(t.v[2]))) / 3.0;
  }

  void seed_simplex() {
    const int count = static_cast<int>(pts_.size());
    if (count < 4) throw ValidationError("convex hull: need at least 4 points in R^3");
    int i0 = 0;
    for (int i = 1; i < count; ++i) {
      if (P(i)[0] < P(i0)[0]) i0 = i;
    }
    int i1 = i0;
    double best = -1.0;
    for (int i = 0; i < count; ++i) {
      double d = (P(i) - P(i0)).squaredNorm();
      if (d > best) { best = d; i1 = i; }
    }
    const V3 axis = (P(i1) - P(i0)).normalized();
    int i2 = i0;
    best = -1.0;
    for (int i = 0; i < count; ++i) {
      const V3 r = P(i) - P(i0);
      double d = (r - r.dot(axis) * axis).norm();
      if (d > best) { best = d; i2 = i; }
    }
    if (best <= tol_) throw ValidationError("convex hull: degenerate (flat) point set");
    const V3 pn = (P(i1) - P(i0)).cross(P(i2) - P(i0)).normalized();
    int i3 = i0;
    best = -1.0;
    for (int i = 0; i < count; ++i) {
      double d = std::abs(pn.dot(P(i) - P(i0)));
      if (d > best) { best = d; i3 = i; }
    }
    if (best <= tol_ || detail::orient3d(P(i0), P(i1), P(i2), P(i3)) == 0) {
      throw ValidationError("convex hull: degenerate (flat) point set");
    }

    const std::array<int, 4> s{i0, i1, i2, i3};
    const std::array<std::array<int, 3>, 4> faces{{{s[0], s[1], s[2]}, {s[0], s[1], s[3]},
                                                   {s[0], s[2], s[3]}, {s[1], s[2], s[3]}}};
    for (auto f : faces) {
      Tri t;
      t.v = f;
      set_plane(t);
      int opposite = s[0];
      for (int q : s) {
        if (q != f[0] && q != f[1] && q != f[2]) opposite = q;
      }
      if (outside(t, opposite)) {
        std::swap(t.v[1], t.v[2]);
        set_plane(t);
      }
      tris_.push_back(std::move(t));
    }
    std::map<std::pair<int, int>, std::pair<int, int>> edge_owner;
    for (int f = 0; f < 4; ++f) {
      for (int k = 0; k < 3; ++k) edge_owner[{tris_[f].v[k], tris_[f].v[(k + 1) % 3]}] = {f, k};
    }
    for (int f = 0; f < 4; ++f) {
      for (int k = 0; k < 3; ++k) {
        auto it = edge_owner.find({tris_[f].v[(k + 1) % 3], tris_[f].v[k]});
        tris_[f].nbr[k] = it->second.first;
      }
    }
    for (int i = 0; i < count; ++i) {
      if (i == i0 || i == i1 || i == i2 || i == i3) continue;
      assign(i, 0, 4);
    }
  }

  void assign(int p, std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      if (tris_[f].alive && outside(tris_[f], p)) {
        tris_[f].conflict.push_back(p);
        return;
      }
    }
  }

  void insert_from(int face) {
    const Tri& seed = tris_[static_cast<std::size_t>(face)];
    int apex = seed.conflict.front();
    double far = dist(seed, apex);
    for (int p : seed.conflict) {
      double d = dist(seed, p);
      if (d > far) { far = d; apex = p; }
    }

    std::vector<int> visible{face};
    std::vector<char> is_visible(tris_.size(), 0);
    is_visible[static_cast<std::size_t>(face)] = 1;
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const Tri& t = tris_[static_cast<std::size_t>(visible[q])];
      for (int nb : t.nbr) {
        if (is_visible[static_cast<std::size_t>(nb)]) continue;
        if (outside(tris_[static_cast<std::size_t>(nb)], apex)) {
          is_visible[static_cast<std::size_t>(nb)] = 1;
          visible.push_back(nb);
        }
      }
    }

    struct HorizonEdge {
      int a, b, outside, outside_edge;
    };
    std::vector<HorizonEdge> horizon;
    for (int f : visible) {
      const Tri& t = tris_[static_cast<std::size_t>(f)];
      for (int k = 0; k < 3; ++k) {
        int nb = t.nbr[k];
        if (is_visible[static_cast<std::size_t>(nb)]) continue;
        const Tri& o = tris_[static_cast<std::size_t>(nb)];
        int ok = 0;
        while (ok < 3 && o.nbr[ok] != f) ++ok;
        if (ok == 3) throw ConstructionError("convex_hull", "broken neighbor links");
        horizon.push_back({t.v[k], t.v[(k + 1) % 3], nb, ok});
      }
    }

    std::vector<int> orphans;
    for (int f : visible) {
      Tri& t = tris_[static_cast<std::size_t>(f)];
      for (int p : t.conflict) {
        if (p != apex) orphans.push_back(p);
      }
      t.conflict.clear();
      t.conflict.shrink_to_fit();
      t.alive = false;
    }

    const std::size_t first_new = tris_.size();
    std::map<int, int> by_start;
    std::map<int, int> by_end;
    for (const auto& h : horizon) {
      Tri t;
      t.v = {h.a, h.b, apex};
      set_plane(t);
      t.nbr[0] = h.outside;
      const int id = static_cast<int>(tris_.size());
      tris_[static_cast<std::size_t>(h.outside)].nbr[h.outside_edge] = id;
      if (!by_start.emplace(h.a, id).second || !by_end.emplace(h.b, id).second) {
        throw ConstructionError("convex_hull", "non-manifold horizon");
      }
      tris_.push_back(std::move(t));
    }
    for (std::size_t f = first_new; f < tris_.size(); ++f) {
      Tri& t = tris_[f];
      auto s = by_start.find(t.v[1]);
      auto e = by_end.find(t.v[0]);
      if (s == by_start.end() || e == by_end.end()) {
        throw ConstructionError("convex_hull", "open horizon loop");
      }
      t.nbr[1] = s->second;
      t.nbr[2] = e->second;
    }
    for (int p : orphans) assign(p, first_new, tris_.size());
  }

  Polytope assemble() const {
    std::vector<int> live;
    for (std::size_t f = 0; f < tris_.size(); ++f) {
      if (tris_[f].alive) live.push_back(static_cast<int>(f));
    }
    std::vector<double> area(tris_.size(), 0.0);
    for (int f : live) {
      const Tri& t = tris_[static_cast<std::size_t>(f)];
      area[static_cast<std::size_t>(f)] = (P(t.v[1]) - P(t.v[0])).cross(P(t.v[2]) - P(t.v[0])).norm();
    }
    std::sort(live.begin(), live.end(), [&](int a, int b) {
      return area[static_cast<std::size_t>(a)] > area[static_cast<std::size_t>(b)];
    });

    // Group coplanar triangles: a neighbor joins when its vertices sit on the
    // seed plane (distance test) or its normal is within the angular
    // tolerance and it is still close in distance.
    std::vector<int> group(tris_.size(), -1);
    std::vector<std::vector<int>> members;
    const double cos_merge = std::cos(kNormalTolerance);
    for (int s : live) {
      if (group[static_cast<std::size_t>(s)] >= 0) continue;
      const int gid = static_cast<int>(members.size());
      members.push_back({s});
      group[static_cast<std::size_t>(s)] = gid;
      const Tri& seed = tris_[static_cast<std::size_t>(s)];
      for (std::size_t q = 0; q < members[static_cast<std::size_t>(gid)].size(); ++q) {
        const Tri& t = tris_[static_cast<std::size_t>(members[static_cast<std::size_t>(gid)][q])];
        for (int nb : t.nbr) {
          if (group[static_cast<std::size_t>(nb)] >= 0) continue;
          const Tri& o = tris_[static_cast<std::size_t>(nb)];
          double off = 0.0;
          for (int v : o.v) off = std::max(off, std::abs(seed.n.dot(P(v)) - seed.d));
          const bool flat = off <= flat_tol_ || (seed.n.dot(o.n) >= cos_merge && off <= 10.0 * flat_tol_);
          if (flat) {
            group[static_cast<std::size_t>(nb)] = gid;
            members[static_cast<std::size_t>(gid)].push_back(nb);
          }
        }
      }
    }

    // Extreme vertices are incident to at least three distinct facets.
    // Hull vertices closer than the flatness tolerance count as one.
    const std::vector<int> rep = cluster_vertices(live);
    std::map<int, std::vector<int>> incident;
    for (int f : live) {
      for (int v : tris_[static_cast<std::size_t>(f)].v) {
        incident[rep[static_cast<std::size_t>(v)]].push_back(group[static_cast<std::size_t>(f)]);
      }
    }
    std::map<int, int> remap;
    std::vector<Vec> vertices;
    for (auto& [v, gs] : incident) {
      std::sort(gs.begin(), gs.end());
      gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
      if (gs.size() >= 3) {
        remap[v] = static_cast<int>(vertices.size());
        vertices.push_back(Vec(P(v)));
      }
    }

    std::vector<Facet> facets;
    for (const auto& tris : members) {
      std::vector<int> ring;
      for (int f : tris) {
        for (int v : tris_[static_cast<std::size_t>(f)].v) {
          auto it = remap.find(rep[static_cast<std::size_t>(v)]);
          if (it != remap.end()) ring.push_back(it->second);
        }
      }
      std::sort(ring.begin(), ring.end());
      ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
      if (ring.size() < 3) continue;
      const V3 seed_n = tris_[static_cast<std::size_t>(tris.front())].n;
      facets.push_back(fit_facet(vertices, ring, seed_n));
    }
    return Polytope(3, std::move(vertices), std::move(facets));
  }

  /// Representative (smallest index) of each hull vertex's cluster.
  std::vector<int> cluster_vertices(const std::vector<int>& live) const {
    std::vector<int> rep(pts_.size());
    std::iota(rep.begin(), rep.end(), 0);
    std::vector<int> used;
    for (int f : live) {
      for (int v : tris_[static_cast<std::size_t>(f)].v) used.push_back(v);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::sort(used.begin(), used.end(), [&](int a, int b) { return P(a)[0] < P(b)[0] || (P(a)[0] == P(b)[0] && a < b); });
    auto find = [&](int x) {
      while (rep[static_cast<std::size_t>(x)] != x) x = rep[static_cast<std::size_t>(x)];
      return x;
    };
    for (std::size_t i = 0; i < used.size(); ++i) {
      for (std::size_t k = i + 1; k < used.size() && P(used[k])[0] - P(used[i])[0] <= flat_tol_; ++k) {
        if ((P(used[k]) - P(used[i])).norm() > flat_tol_) continue;
        const int a = find(used[i]);
        const int b = find(used[k]);
        if (a != b) rep[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    for (int v : used) rep[static_cast<std::size_t>(v)] = find(v);
    return rep;
  }

  static Facet fit_facet(const std::vector<Vec>& vertices, std::vector<int> ring, const V3& hint) {
    V3 c = V3::Zero();
    for (int i : ring) c += vertices[static_cast<std::size_t>(i)].head<3>();
    c /= static_cast<double>(ring.size());
    V3 n = hint;
    if (ring.size() > 3) {
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (int i : ring) {
        const V3 r = vertices[static_cast<std::size_t>(i)].head<3>() - c;
        cov += r * r.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
      n = es.eigenvectors().col(0);
    } else {
      const V3& a = vertices[static_cast<std::size_t>(ring[0])].head<3>();
      const V3& b = vertices[static_cast<std::size_t>(ring[1])].head<3>();
      const V3& d = vertices[static_cast<std::size_t>(ring[2])].head<3>();
      n = (b - a).cross(d - a);
    }
    if (n.dot(hint) < 0.0) n = -n;
    n.normalize();
    // Sort the boundary counter-clockwise around the outer normal.
    V3 e1 = (vertices[static_cast<std::size_t>(ring[0])].head<3>() - c);
    e1 = (e1 - e1.dot(n) * n).normalized();
    const V3 e2 = n.cross(e1);
    std::vector<std::pair<double, int>> keyed;
    for (int i : ring) {
      const V3 r = vertices[static_cast<std::size_t>(i)].head<3>() - c;
      keyed.emplace_back(std::atan2(r.dot(e2), r.dot(e1)), i);
    }
    std::sort(keyed.begin(), keyed.end());
    ring.clear();
    for (const auto& [angle, i] : keyed) ring.push_back(i);
    double offset = 0.0;
    for (int i : ring) offset += n.dot(vertices[static_cast<std::size_t>(i)].head<3>());
    offset /= static_cast<double>(ring.size());
    return Facet{Direction(Vec(n)), offset, std::move(ring)};
  }

  double tol_;
  double flat_tol_;
  std::vector<V3> pts_;
  std::vector<Tri> tris_;
};

}  // namespace

Polytope convex_hull(std::span<const Vec> points) {
  if (points.empty()) throw ValidationError("convex hull of an empty point set");
  const int dim = static_cast<int>(points.front().size());
  for (const auto& p : points) {
    if (p.size() != dim) throw ValidationError("convex hull: mixed point dimensions");
  }
  if (dim == 2) return hull_2d(points);
  if (dim == 3) return Hull3(points).run();
  throw ValidationError("convex hull: dimension must be 2 or 3");
}

}  // namespace vh
