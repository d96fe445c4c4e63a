#include "vh/polytope.hpp"

#include "vh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <string>

namespace vh {

namespace {

double coordinate_scale(const std::vector<Vec>& vertices) {
  double s = 1.0;
  for (const auto& v : vertices) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

Vec polygon_normal(const std::vector<Vec>& vertices, const std::vector<int>& ring) {
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  const std::size_t k = ring.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Vector3d a = vertices[static_cast<std::size_t>(ring[i])].head<3>();
    const Eigen::Vector3d b = vertices[static_cast<std::size_t>(ring[(i + 1) % k])].head<3>();
    n += a.cross(b);
  }
  return Vec(n);
}

}  // namespace

Polytope::Polytope(int dim, std::vector<Vec> vertices, std::vector<Facet> facets)
    : dim_(dim), vertices_(std::move(vertices)), facets_(std::move(facets)) {
  if (dim_ != 2 && dim_ != 3) throw ValidationError("polytope dimension must be 2 or 3");
  if (vertices_.size() < static_cast<std::size_t>(dim_ + 1) ||
      facets_.size() < static_cast<std::size_t>(dim_ + 1)) {
    throw ValidationError("polytope needs at least n+1 vertices and facets");
  }
  for (const auto& v : vertices_) {
    if (v.size() != dim_) throw ValidationError("polytope vertex dimension mismatch");
  }
  const double tol = kPlaneTolerance * coordinate_scale(vertices_);
  for (auto& f : facets_) {
    if (f.normal.dim() != dim_) throw ValidationError("facet normal dimension mismatch");
    if (f.vertices.size() < static_cast<std::size_t>(dim_)) {
      throw ValidationError("facet with fewer than n vertices");
    }
    for (int vi : f.vertices) {
      if (vi < 0 || static_cast<std::size_t>(vi) >= vertices_.size()) {
        throw ValidationError("facet vertex index out of range");
      }
      const double off = vertices_[static_cast<std::size_t>(vi)].dot(f.normal.vec()) - f.offset;
      if (std::abs(off) > tol) {
        throw ValidationError("facet vertex off its hyperplane by " + std::to_string(off));
      }
    }
    // Canonical orientation of the boundary list.
    if (dim_ == 3) {
      if (polygon_normal(vertices_, f.vertices).dot(f.normal.vec()) < 0.0) {
        std::reverse(f.vertices.begin(), f.vertices.end());
      }
    } else {
      const Vec d = vertices_[static_cast<std::size_t>(f.vertices[1])] -
                    vertices_[static_cast<std::size_t>(f.vertices[0])];
      if (d[1] * f.normal[0] - d[0] * f.normal[1] < 0.0) std::swap(f.vertices[0], f.vertices[1]);
    }
  }

  neighbors_.assign(facets_.size(), {});
  std::map<std::pair<int, int>, std::vector<int>> incidence;
  for (std::size_t fi = 0; fi < facets_.size(); ++fi) {
    const auto& ring = facets_[fi].vertices;
    if (dim_ == 2) {
      for (int v : ring) incidence[{v, v}].push_back(static_cast<int>(fi));
    } else {
      for (std::size_t k = 0; k < ring.size(); ++k) {
        int a = ring[k];
        int b = ring[(k + 1) % ring.size()];
        incidence[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(fi));
      }
    }
  }
  for (const auto& [key, owners] : incidence) {
    for (std::size_t i = 0; i < owners.size(); ++i) {
      for (std::size_t j = i + 1; j < owners.size(); ++j) {
        int a = std::min(owners[i], owners[j]);
        int b = std::max(owners[i], owners[j]);
        if (a != b) adjacency_.emplace_back(a, b);
      }
    }
  }
  std::sort(adjacency_.begin(), adjacency_.end());
  adjacency_.erase(std::unique(adjacency_.begin(), adjacency_.end()), adjacency_.end());
  for (const auto& [a, b] : adjacency_) {
    neighbors_[static_cast<std::size_t>(a)].push_back(b);
    neighbors_[static_cast<std::size_t>(b)].push_back(a);
  }
}

bool Polytope::adjacent(int a, int b) const {
  const auto& n = neighbors(a);
  return std::find(n.begin(), n.end(), b) != n.end();
}

FacetRef Polytope::facet_ref(int index) const { return FacetRef{index, facet(index).normal}; }

std::optional<int> Polytope::find_facet(const Direction& normal, double angle_tol) const {
  std::optional<int> best;
  double best_dot = -2.0;
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const double d = facets_[i].normal.vec().dot(normal.vec());
    if (d > best_dot) {
      best_dot = d;
      best = static_cast<int>(i);
    }
  }
  if (best && sphere_distance(facets_[static_cast<std::size_t>(*best)].normal, normal) <= angle_tol) {
    return best;
  }
  return std::nullopt;
}

Vec Polytope::vertex_centroid() const {
  Vec c = Vec::Zero(dim_);
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

Vec Polytope::facet_centroid(int facet_index) const {
  const auto& f = facet(facet_index);
  Vec c = Vec::Zero(dim_);
  for (int v : f.vertices) c += vertices_[static_cast<std::size_t>(v)];
  return c / static_cast<double>(f.vertices.size());
}

std::vector<int> Polytope::shared_vertices(int a, int b) const {
  std::vector<int> va = facet(a).vertices;
  std::vector<int> vb = facet(b).vertices;
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  std::vector<int> out;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(out));
  return out;
}

double Polytope::max_inequality_residual() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) {
    for (const auto& v : vertices_) worst = std::max(worst, v.dot(f.normal.vec()) - f.offset);
  }
  return worst;
}

double support_value(const Polytope& p, const Vec& u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : p.vertices()) best = std::max(best, v.dot(u));
  return best;
}

double support_value(const Polytope& p, const Direction& u) { return support_value(p, u.vec()); }

std::vector<Vec> support_face(const Polytope& p, const Direction& u, double tol) {
  const double h = support_value(p, u);
  std::vector<Vec> out;
  for (const auto& v : p.vertices()) {
    if (v.dot(u.vec()) >= h - tol) out.push_back(v);
  }
  return out;
}

std::vector<FacialTangent> facial_tangents(const Polytope& p, const FacetRef& f) {
  const Facet& facet = p.facet(f.index);
  if (!facet.normal.approx_equal(f.normal, 1e-7)) {
    throw ValidationError("facet reference normal does not match the polytope");
  }
  const Direction& u = facet.normal;
  std::vector<FacialTangent> out;
  for (int nb : p.neighbors(f.index)) {
    const Direction& v = p.facet(nb).normal;
    const double alpha = sphere_distance(u, v);
    out.push_back(FacialTangent{TangentVector(u, v.vec()), p.facet_ref(nb), alpha});
  }
  return out;
}

double relint_margin(const Polytope& p, int facet_index, const Vec& x) {
  const Facet& f = p.facet(facet_index);
  const auto& vs = p.vertices();
  if (p.dim() == 2) {
    const Vec& a = vs[static_cast<std::size_t>(f.vertices[0])];
    const Vec& b = vs[static_cast<std::size_t>(f.vertices[1])];
    const Vec e = (b - a).normalized();
    return std::min((x - a).dot(e), (b - x).dot(e));
  }
  const Eigen::Vector3d n = f.normal.vec().head<3>();
  double margin = std::numeric_limits<double>::infinity();
  const std::size_t k = f.vertices.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Vector3d a = vs[static_cast<std::size_t>(f.vertices[i])].head<3>();
    const Eigen::Vector3d b = vs[static_cast<std::size_t>(f.vertices[(i + 1) % k])].head<3>();
    const Eigen::Vector3d inward = n.cross(b - a).normalized();
    margin = std::min(margin, (x.head<3>() - a).dot(inward));
  }
  return margin;
}

void write_off(const Polytope& p, std::ostream& out) {
  if (p.dim() != 3) throw ValidationError("OFF export needs a 3-polytope");
  out << "OFF\n" << p.vertices().size() << ' ' << p.facets().size() << " 0\n";
  out.precision(17);
  for (const auto& v : p.vertices()) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& f : p.facets()) {
    out << f.vertices.size();
    for (int i : f.vertices) out << ' ' << i;
    out << '\n';
  }
}

}  // namespace vh
