#include "clip_polytope.hpp"

#include "vh/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace vh::detail {

namespace {

enum Side : char { kIn, kOn, kOut };

}  // namespace

ClipPolytope::ClipPolytope(const Vec& lo, const Vec& hi) : dim_(static_cast<int>(lo.size())) {
  if (dim_ == 2) {
    ring2_ = {add_vertex(make_vec({lo[0], lo[1]})), add_vertex(make_vec({hi[0], lo[1]})),
              add_vertex(make_vec({hi[0], hi[1]})), add_vertex(make_vec({lo[0], hi[1]}))};
    edge_label2_ = {-1, -2, -3, -4};
    return;
  }
  for (int b = 0; b < 8; ++b) {
    add_vertex(make_vec({(b & 1) ? hi[0] : lo[0], (b & 2) ? hi[1] : lo[1], (b & 4) ? hi[2] : lo[2]}));
  }
  faces_ = {{-1, {0, 2, 6, 4}}, {-2, {1, 3, 7, 5}}, {-3, {0, 1, 5, 4}},
            {-4, {2, 3, 7, 6}}, {-5, {0, 1, 3, 2}}, {-6, {4, 5, 7, 6}}};
}

int ClipPolytope::add_vertex(const Vec& v) {
  verts_.push_back(v);
  alive_.push_back(1);
  return static_cast<int>(verts_.size()) - 1;
}

std::vector<int> ClipPolytope::live_vertices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    if (alive_[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

int ClipPolytope::argmax(const Vec& c) const {
  int best = -1;
  double value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    if (!alive_[i]) continue;
    const double x = verts_[i].dot(c);
    if (x > value) {
      value = x;
      best = static_cast<int>(i);
    }
  }
  return best;
}

bool ClipPolytope::touches_box() const {
  if (dim_ == 2) {
    return std::any_of(edge_label2_.begin(), edge_label2_.end(), [](int l) { return l < 0; });
  }
  return std::any_of(faces_.begin(), faces_.end(), [](const Face& f) { return f.label < 0; });
}

std::vector<int> ClipPolytope::incident_labels(int i) const {
  std::vector<int> out;
  if (dim_ == 2) {
    const std::size_t k = ring2_.size();
    for (std::size_t e = 0; e < k; ++e) {
      if (ring2_[e] == i || ring2_[(e + 1) % k] == i) out.push_back(edge_label2_[e]);
    }
    return out;
  }
  for (const auto& f : faces_) {
    if (std::find(f.ring.begin(), f.ring.end(), i) != f.ring.end()) out.push_back(f.label);
  }
  return out;
}

ClipPolytope::Cut ClipPolytope::cut(const Vec& normal, double offset, int label, double tol) {
  std::vector<double> s(verts_.size(), 0.0);
  std::vector<char> side(verts_.size(), kOut);
  bool any_in = false;
  bool any_out = false;
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    if (!alive_[i]) continue;
    s[i] = verts_[i].dot(normal) - offset;
    side[i] = s[i] < -tol ? kIn : (s[i] > tol ? kOut : kOn);
    any_in = any_in || side[i] == kIn;
    any_out = any_out || side[i] == kOut;
  }
  if (!any_out) return Cut::kRedundant;
  if (!any_in) return Cut::kEmpty;

  std::map<std::pair<int, int>, int> crossing;
  auto cross = [&](int a, int b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = crossing.find(key);
    if (it != crossing.end()) return it->second;
    const double sa = s[static_cast<std::size_t>(a)];
    const double sb = s[static_cast<std::size_t>(b)];
    const Vec& pa = verts_[static_cast<std::size_t>(a)];
    const Vec& pb = verts_[static_cast<std::size_t>(b)];
    const Vec x = pa + (sa / (sa - sb)) * (pb - pa);
    const int id = add_vertex(x);
    s.push_back(0.0);
    side.push_back(kOn);
    crossing.emplace(key, id);
    return id;
  };
  auto sd = [&](int v) { return side[static_cast<std::size_t>(v)]; };

  if (dim_ == 2) {
    std::vector<int> ring;
    std::vector<int> labels;
    const std::size_t k = ring2_.size();
    for (std::size_t e = 0; e < k; ++e) {
      const int a = ring2_[e];
      const int b = ring2_[(e + 1) % k];
      const int l = edge_label2_[e];
      const Side sa = static_cast<Side>(sd(a));
      const Side sb = static_cast<Side>(sd(b));
      if (sa == kIn && sb == kOut) {
        ring.push_back(a);
        labels.push_back(l);
        ring.push_back(cross(a, b));
        labels.push_back(label);
      } else if (sa == kOn && sb == kOut) {
        ring.push_back(a);
        labels.push_back(label);
      } else if (sa == kOut && sb == kIn) {
        ring.push_back(cross(a, b));
        labels.push_back(l);
      } else if (sa != kOut) {
        ring.push_back(a);
        labels.push_back(l);
      }
    }
    for (int v : ring2_) {
      if (sd(v) == kOut) alive_[static_cast<std::size_t>(v)] = 0;
    }
    ring2_ = std::move(ring);
    edge_label2_ = std::move(labels);
    return Cut::kCut;
  }

  std::vector<Face> kept;
  kept.reserve(faces_.size() + 1);
  std::set<int> cap;
  for (auto& f : faces_) {
    bool has_in = false;
    std::vector<int> ring;
    const std::size_t k = f.ring.size();
    for (std::size_t e = 0; e < k; ++e) {
      const int a = f.ring[e];
      const int b = f.ring[(e + 1) % k];
      const char sa = sd(a);
      const char sb = sd(b);
      if (sa != kOut) ring.push_back(a);
      if (sa == kIn) has_in = true;
      if (sa == kOn) cap.insert(a);
      if ((sa == kIn && sb == kOut) || (sa == kOut && sb == kIn)) {
        const int x = cross(a, b);
        ring.push_back(x);
        cap.insert(x);
      }
    }
    if (has_in && ring.size() >= 3) kept.push_back(Face{f.label, std::move(ring)});
  }
  for (std::size_t i = 0; i < alive_.size(); ++i) {
    if (alive_[i] && side[i] == kOut) alive_[i] = 0;
  }
  // On-vertices only survive when some face still uses them.
  std::set<int> used;
  for (const auto& f : kept) used.insert(f.ring.begin(), f.ring.end());
  std::vector<int> cap_ring;
  for (int v : cap) {
    if (used.count(v)) cap_ring.push_back(v);
  }
  for (std::size_t i = 0; i < alive_.size(); ++i) {
    if (alive_[i] && !used.count(static_cast<int>(i))) alive_[i] = 0;
  }
  if (cap_ring.size() >= 3) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int v : cap_ring) c += verts_[static_cast<std::size_t>(v)].head<3>();
    c /= static_cast<double>(cap_ring.size());
    const Eigen::Vector3d n = normal.head<3>().normalized();
    Eigen::Vector3d e1 = verts_[static_cast<std::size_t>(cap_ring[0])].head<3>() - c;
    e1 -= e1.dot(n) * n;
    if (e1.norm() == 0.0) e1 = n.unitOrthogonal();
    e1.normalize();
    const Eigen::Vector3d e2 = n.cross(e1);
    std::vector<std::pair<double, int>> keyed;
    for (int v : cap_ring) {
      const Eigen::Vector3d r = verts_[static_cast<std::size_t>(v)].head<3>() - c;
      keyed.emplace_back(std::atan2(r.dot(e2), r.dot(e1)), v);
    }
    std::sort(keyed.begin(), keyed.end());
    Face f{label, {}};
    for (const auto& kv : keyed) f.ring.push_back(kv.second);
    kept.push_back(std::move(f));
  }
  faces_ = std::move(kept);
  return Cut::kCut;
}

Polytope ClipPolytope::to_polytope(const std::vector<Halfspace>& planes) const {
  if (touches_box()) throw ValidationError("halfspace intersection is unbounded");
  auto plane = [&](int label) -> const Halfspace& { return planes.at(static_cast<std::size_t>(label)); };

  double scale = 1.0;
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    if (alive_[i]) scale = std::max(scale, verts_[i].cwiseAbs().maxCoeff());
  }

  // Re-solve a vertex from its incident planes in the least-squares sense.
  auto refine = [&](int v, const std::vector<int>& labels) {
    const std::size_t m = labels.size();
    Eigen::MatrixXd a(static_cast<Eigen::Index>(m), dim_);
    Eigen::VectorXd b(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
      a.row(static_cast<Eigen::Index>(r)) = plane(labels[r]).normal.vec().transpose();
      b[static_cast<Eigen::Index>(r)] = plane(labels[r]).offset;
    }
    const Vec& old = verts_[static_cast<std::size_t>(v)];
    Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    if (!x.allFinite() || (Vec(x) - old).norm() > 1e-6 * scale) return old;
    return Vec(x);
  };

  if (dim_ == 2) {
    std::vector<Vec> vertices;
    std::vector<Facet> facets;
    const std::size_t k = ring2_.size();
    for (std::size_t i = 0; i < k; ++i) {
      const int prev = edge_label2_[(i + k - 1) % k];
      vertices.push_back(refine(ring2_[i], {prev, edge_label2_[i]}));
    }
    for (std::size_t i = 0; i < k; ++i) {
      const Halfspace& h = plane(edge_label2_[i]);
      facets.push_back(Facet{h.normal, h.offset, {static_cast<int>(i), static_cast<int>((i + 1) % k)}});
    }
    return Polytope(2, std::move(vertices), std::move(facets));
  }

  std::map<int, std::set<int>> labels_of;
  for (const auto& f : faces_) {
    for (int v : f.ring) labels_of[v].insert(f.label);
  }
  std::map<int, int> remap;
  std::vector<Vec> vertices;
  for (const auto& [v, ls] : labels_of) {
    if (ls.size() < 3) continue;
    remap[v] = static_cast<int>(vertices.size());
    vertices.push_back(refine(v, std::vector<int>(ls.begin(), ls.end())));
  }
  std::vector<Facet> facets;
  for (const auto& f : faces_) {
    std::vector<int> ring;
    for (int v : f.ring) {
      auto it = remap.find(v);
      if (it != remap.end()) ring.push_back(it->second);
    }
    if (ring.size() < 3) continue;
    const Halfspace& h = plane(f.label);
    facets.push_back(Facet{h.normal, h.offset, std::move(ring)});
  }
  return Polytope(3, std::move(vertices), std::move(facets));
}

}  // namespace vh::detail

namespace vh {

Polytope halfspace_intersection(int dim, std::span<const Halfspace> halfspaces) {
  if (dim != 2 && dim != 3) throw ValidationError("halfspace intersection: dimension must be 2 or 3");
  if (halfspaces.size() < static_cast<std::size_t>(dim + 1)) {
    throw ValidationError("halfspace intersection is unbounded (fewer than n+1 halfspaces)");
  }
  double bmax = 0.0;
  for (const auto& h : halfspaces) {
    if (h.normal.dim() != dim) throw ValidationError("halfspace dimension mismatch");
    bmax = std::max(bmax, std::abs(h.offset));
  }
  const double box = 1e3 * (1.0 + bmax);
  const double tol = kPlaneTolerance * (1.0 + bmax);
  detail::ClipPolytope clip(Vec::Constant(dim, -box), Vec::Constant(dim, box));
  std::vector<Halfspace> planes(halfspaces.begin(), halfspaces.end());
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const auto r = clip.cut(planes[i].normal.vec(), planes[i].offset, static_cast<int>(i), tol);
    if (r == detail::ClipPolytope::Cut::kEmpty) {
      throw ValidationError("halfspace intersection has empty interior");
    }
  }
  return clip.to_polytope(planes);
}

}  // namespace vh
