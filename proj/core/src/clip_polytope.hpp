#pragma once

#include "vh/polytope.hpp"

#include <vector>

namespace vh::detail {

/// Convex polytope maintained as a box successively clipped by halfspaces.
/// Faces carry the label of the halfspace that created them; the initial
/// box faces carry negative labels.
class ClipPolytope {
 public:
  enum class Cut { kRedundant, kCut, kEmpty };

  ClipPolytope(const Vec& lo, const Vec& hi);

  /// Intersects with {x : <normal, x> <= offset}. `normal` need not be unit;
  /// `tol` is applied to the signed distance <normal, x> - offset.
  Cut cut(const Vec& normal, double offset, int label, double tol);

  int dim() const noexcept { return dim_; }
  /// Indices of the current vertices.
  std::vector<int> live_vertices() const;
  const Vec& vertex(int i) const { return verts_[static_cast<std::size_t>(i)]; }
  /// Vertex maximizing <c, x>.
  int argmax(const Vec& c) const;
  /// True when some face still stems from the initial box.
  bool touches_box() const;
  /// Labels of the faces whose closure contains vertex i.
  std::vector<int> incident_labels(int i) const;

  /// Polytope whose facets are the labelled faces. `planes[label]` gives the
  /// exact plane of each label; vertices are re-solved from their incident
  /// planes before assembly.
  Polytope to_polytope(const std::vector<Halfspace>& planes) const;

 private:
  struct Face {
    int label;
    std::vector<int> ring;  // n = 3: polygon; n = 2: the two endpoints
  };

  int add_vertex(const Vec& v);

  int dim_;
  std::vector<Vec> verts_;
  std::vector<char> alive_;
  std::vector<Face> faces_;
  // n = 2 keeps one cyclic ring; edge k runs ring[k] -> ring[k+1].
  std::vector<int> ring2_;
  std::vector<int> edge_label2_;
};

}  // namespace vh::detail
