#pragma once

#include "vh/sphere.hpp"
#include "vh/vec.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace vh {

/// Plane-side tolerance for hull and membership tests.
inline constexpr double kPlaneTolerance = 1e-9;
/// Angular tolerance for merging near-coplanar hull facets and for
/// matching facet normals between polytopes.
inline constexpr double kNormalTolerance = 1e-7;
/// Relative distance below which hull points count as coplanar or
/// coincident when triangles are grouped into facets.
inline constexpr double kFlatTolerance = 1e-11;

/// Closed halfspace {x : <normal, x> <= offset}.
struct Halfspace {
  Direction normal;
  double offset;
};

struct Facet {
  Direction normal;
  double offset;
  /// Vertex indices. n = 3: counter-clockwise seen from outside.
  /// n = 2: the two endpoints, in counter-clockwise polygon order.
  std::vector<int> vertices;
};

/// Reference to a facet of a particular polytope.
struct FacetRef {
  int index;
  Direction normal;
};

/**
 * Full-dimensional convex polytope in R^2 or R^3 holding both
 * representations: extreme vertices, facets (outer normal, offset, boundary
 * vertex list) and the facet adjacency relation. Two facets are adjacent
 * iff they share an (n-2)-face: a vertex for n = 2, an edge for n = 3.
 *
 * Immutable after construction.
 */
class Polytope {
 public:
  /// Assembles a polytope and computes its adjacency. Throws
  /// ValidationError when the facet data contradicts the vertices.
  Polytope(int dim, std::vector<Vec> vertices, std::vector<Facet> facets);

  int dim() const noexcept { return dim_; }
  const std::vector<Vec>& vertices() const noexcept { return vertices_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  const Facet& facet(int i) const { return facets_.at(static_cast<std::size_t>(i)); }
  std::size_t facet_count() const noexcept { return facets_.size(); }

  /// Adjacent facet pairs (i < j), sorted.
  const std::vector<std::pair<int, int>>& adjacency() const noexcept { return adjacency_; }
  const std::vector<int>& neighbors(int facet) const {
    return neighbors_.at(static_cast<std::size_t>(facet));
  }
  bool adjacent(int a, int b) const;

  FacetRef facet_ref(int index) const;
  /// Facet whose normal is within `angle_tol` of `normal`.
  std::optional<int> find_facet(const Direction& normal, double angle_tol = kNormalTolerance) const;

  Vec vertex_centroid() const;
  Vec facet_centroid(int facet) const;
  /// Vertex indices common to two facets.
  std::vector<int> shared_vertices(int a, int b) const;

  /// max over vertices and facets of <v, normal> - offset.
  double max_inequality_residual() const;

 private:
  int dim_;
  std::vector<Vec> vertices_;
  std::vector<Facet> facets_;
  std::vector<std::pair<int, int>> adjacency_;
  std::vector<std::vector<int>> neighbors_;
};

double support_value(const Polytope& p, const Direction& u);
double support_value(const Polytope& p, const Vec& u);

/// Vertices within `tol` of the supporting hyperplane H(P, u).
std::vector<Vec> support_face(const Polytope& p, const Direction& u, double tol = kPlaneTolerance);

/// Bounded intersection of halfspaces. Redundant halfspaces are dropped;
/// facet normals and offsets are the input values. Throws ValidationError
/// naming the condition when the system is unbounded or has empty interior.
Polytope halfspace_intersection(int dim, std::span<const Halfspace> halfspaces);

/// Convex hull of a point set spanning R^n. Throws ValidationError on flat
/// input.
Polytope convex_hull(std::span<const Vec> points);

/// conv{(1-mu) p + mu q : p in vert P, q in vert Q}.
Polytope minkowski_combine(const Polytope& p, const Polytope& q, double mu);

struct FacialTangent {
  TangentVector tangent;
  FacetRef neighbor;
  /// Delta(u, v) for the neighbor normal v.
  double angle;
};

/// For every facet adjacent to `f`: the unique t in T_u with
/// v = cos(alpha) u + sin(alpha) t.
std::vector<FacialTangent> facial_tangents(const Polytope& p, const FacetRef& f);

/// Distance from x to the relative boundary of a facet, measured inside the
/// facet's hyperplane; negative when x lies outside the facet.
double relint_margin(const Polytope& p, int facet, const Vec& x);

/// Geomview OFF (n = 3 only).
void write_off(const Polytope& p, std::ostream& out);

}  // namespace vh
