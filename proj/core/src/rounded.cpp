#include "vh/rounded.hpp"

#include "vh/errors.hpp"
#include "vh/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vh {

namespace {

struct Caps {
  const Polytope* base;
  const std::vector<Vec>* z;
  const std::vector<double>* rho;

  double value(std::size_t j, const Vec& p, double eps) const {
    const Vec& u = base->facets()[j].normal.vec();
    const Vec r = p - (*z)[j];
    const double a = r.dot(u);
    const double w2 = (r - a * u).squaredNorm();
    const double rj = (*rho)[j];
    return a + eps * (w2 / (rj * rj) - 1.0);
  }
};

/// Smallest halving level h with start 2^-h <= bound.
int level_for(double start, double bound) {
  if (!(bound > 0.0)) return std::numeric_limits<int>::max();
  int h = std::max(0, static_cast<int>(std::ceil(std::log2(start / bound))));
  while (std::ldexp(start, -h) > bound) ++h;
  while (h > 0 && std::ldexp(start, -(h - 1)) <= bound) --h;
  return h;
}

/// Bounding-box tree over a point set, used to skip far groups of points
/// when scanning a cap.
class BoxTree {
 public:
  explicit BoxTree(const std::vector<Vec>& points) : points_(points), order_(points.size()) {
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    if (!points.empty()) build(0, points.size());
  }

  struct Node {
    Vec center;
    Vec half;
    std::size_t begin;
    std::size_t end;
    int left = -1;
    int right = -1;
  };

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<int>& order() const noexcept { return order_; }

 private:
  static constexpr std::size_t kLeaf = 8;

  int build(std::size_t begin, std::size_t end) {
    const int dim = static_cast<int>(points_[static_cast<std::size_t>(order_[begin])].size());
    Vec lo = points_[static_cast<std::size_t>(order_[begin])];
    Vec hi = lo;
    for (std::size_t k = begin; k < end; ++k) {
      lo = lo.cwiseMin(points_[static_cast<std::size_t>(order_[k])]);
      hi = hi.cwiseMax(points_[static_cast<std::size_t>(order_[k])]);
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({Vec(0.5 * (lo + hi)), Vec(0.5 * (hi - lo)), begin, end});
    if (end - begin <= kLeaf) return id;
    int axis = 0;
    for (int d = 1; d < dim; ++d) {
      if (hi[d] - lo[d] > hi[axis] - lo[axis]) axis = d;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end), [&](int x, int y) {
                       return points_[static_cast<std::size_t>(x)][axis] < points_[static_cast<std::size_t>(y)][axis];
                     });
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  const std::vector<Vec>& points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

/// Range of the cap-j quantities over a box grown by `grow`: the largest
/// signed height a = <p - z_j, u_j> and the largest squared distance to z_j.
struct BoxBound {
  double a_max;
  double d2_max;
};

BoxBound box_bound(const Caps& caps, std::size_t j, const BoxTree::Node& node, double grow) {
  const Vec& u = caps.base->facets()[j].normal.vec();
  const Vec& z = (*caps.z)[j];
  double a = 0.0;
  double d2 = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const double c = node.center[k] - z[k];
    const double e = node.half[k] + grow;
    a += c * u[k] + std::abs(u[k]) * e;
    const double far = std::abs(c) + e;
    d2 += far * far;
  }
  return {a, d2};
}

/// Depth-first scan of the tree; `prune(node)` skips a subtree and
/// `visit(index)` handles one point.
template <class Prune, class Visit>
void scan(const BoxTree& tree, Prune&& prune, Visit&& visit) {
  if (tree.nodes().empty()) return;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const auto& node = tree.nodes()[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (prune(node)) continue;
    if (node.left < 0) {
      for (std::size_t k = node.begin; k < node.end; ++k) visit(static_cast<std::size_t>(tree.order()[k]));
      continue;
    }
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
}

/// Vertex conditions are affine in eps: a + eps b <= 0 with a <= 0 up to
/// rounding, so each pair with b > 0 caps eps at -a / b.
int vertex_level(const Caps& caps, double start) {
  const std::size_t m = caps.base->facet_count();
  const auto& verts = caps.base->vertices();
  const BoxTree tree(verts);
  std::vector<int> level(m, 0);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const Vec& u = caps.base->facets()[j].normal.vec();
      const double rj = (*caps.rho)[j];
      const double r2 = rj * rj;
      double lowest = start;
      scan(
          tree,
          [&](const BoxTree::Node& node) {
            const BoxBound bb = box_bound(caps, j, node, 0.0);
            const double b_max = bb.d2_max / r2 - 1.0;
            if (b_max <= 0.0) return true;
            return std::max(0.0, -bb.a_max) / b_max > lowest * (1.0 + 1e-12);
          },
          [&](std::size_t v) {
            const Vec r = verts[v] - (*caps.z)[j];
            const double a = r.dot(u);
            const double b = (r - a * u).squaredNorm() / r2 - 1.0;
            if (b > 0.0) lowest = std::min(lowest, std::max(0.0, -a) / b);
          });
      level[j] = lowest < start ? level_for(start, lowest) : 0;
    }
  });
  return *std::max_element(level.begin(), level.end());
}

/// Apex conditions are monotone in eps; each pair is halved from the
/// current level until it holds, up to `cap`. A box whose bound already
/// holds at the current level holds at every later one.
int apex_level(const Caps& caps, double start, int from, int cap) {
  const std::size_t m = caps.base->facet_count();
  const BoxTree tree(*caps.z);
  std::vector<int> level(m, from);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double r2 = (*caps.rho)[j] * (*caps.rho)[j];
      int h = from;
      scan(
          tree,
          [&](const BoxTree::Node& node) {
            if (h > cap) return true;
            const double eps = std::ldexp(start, -h);
            const BoxBound bb = box_bound(caps, j, node, eps);
            return bb.a_max + eps * (bb.d2_max / r2 - 1.0) < 0.0;
          },
          [&](std::size_t i) {
            if (i == j) return;
            const Vec& ui = caps.base->facets()[i].normal.vec();
            while (h <= cap) {
              const double eps = std::ldexp(start, -h);
              if (caps.value(j, Vec((*caps.z)[i] + eps * ui), eps) <= 0.0) break;
              ++h;
            }
          });
      level[j] = h;
    }
  });
  return *std::max_element(level.begin(), level.end());
}

double coordinate_scale(const Polytope& p) {
  double s = 1.0;
  for (const auto& v : p.vertices()) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

void check_touch_points(const Polytope& p, const std::vector<Vec>& z) {
  if (z.size() != p.facet_count()) {
    throw ValidationError("rounding needs one touch point per facet (" + std::to_string(p.facet_count()) +
                          "), got " + std::to_string(z.size()));
  }
  const double scale = coordinate_scale(p);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto& f = p.facets()[i];
    if (z[i].size() != p.dim()) throw ValidationError("touch point dimension mismatch");
    const double off = z[i].dot(f.normal.vec()) - f.offset;
    if (std::abs(off) > 1e-9 * scale) {
      throw ValidationError("touch point " + std::to_string(i) + " is off its facet hyperplane");
    }
    if (!(relint_margin(p, static_cast<int>(i), z[i]) > 1e-12 * scale)) {
      throw ValidationError("touch point " + std::to_string(i) + " is not in the relative interior of its facet");
    }
  }
}

}  // namespace

RoundedBody::RoundedBody(Polytope base, std::vector<Vec> touch_points, std::vector<double> rho, double epsilon)
    : base_(std::move(base)), touch_(std::move(touch_points)), rho_(std::move(rho)), eps_(epsilon) {
  if (!(eps_ > 0.0) || !std::isfinite(eps_)) throw ValidationError("rounding epsilon must be positive");
  check_touch_points(base_, touch_);
  if (rho_.size() != touch_.size()) throw ValidationError("one disc radius per facet required");
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    double circ = 0.0;
    for (int v : base_.facets()[i].vertices) {
      circ = std::max(circ, (base_.vertices()[static_cast<std::size_t>(v)] - touch_[i]).norm());
    }
    if (!(rho_[i] > circ)) {
      throw ValidationError("disc radius of facet " + std::to_string(i) + " does not contain the facet");
    }
  }
  const Residuals r = residuals();
  if (r.vertex > 1e-9) {
    throw ValidationError("rounding invariant violated: base vertex outside a cap set by " + std::to_string(r.vertex));
  }
  if (r.apex > 1e-9) {
    throw ValidationError("rounding invariant violated: apex outside a foreign cap set by " + std::to_string(r.apex));
  }
}

double RoundedBody::profile_value(int i, const Vec& p) const {
  return Caps{&base_, &touch_, &rho_}.value(idx(i), p, eps_);
}

Vec RoundedBody::profile_gradient(int i, const Vec& p) const {
  const Vec& u = base_.facet(i).normal.vec();
  const Vec r = p - touch_[idx(i)];
  return u + curvature(i) * (r - r.dot(u) * u);
}

double RoundedBody::max_violation(const Vec& p, int* argmax) const {
  const Caps caps{&base_, &touch_, &rho_};
  double best = -std::numeric_limits<double>::infinity();
  int arg = -1;
  for (std::size_t j = 0; j < touch_.size(); ++j) {
    const double g = caps.value(j, p, eps_);
    if (g > best) {
      best = g;
      arg = static_cast<int>(j);
    }
  }
  if (argmax) *argmax = arg;
  return best;
}

Vec RoundedBody::apex(int i) const { return touch_[idx(i)] + eps_ * base_.facet(i).normal.vec(); }

RoundedBody::Residuals RoundedBody::residuals() const {
  const Caps caps{&base_, &touch_, &rho_};
  const std::size_t m = touch_.size();
  std::vector<Vec> apexes;
  apexes.reserve(m);
  for (std::size_t i = 0; i < m; ++i) apexes.push_back(apex(static_cast<int>(i)));
  const BoxTree vertex_tree(base_.vertices());
  const BoxTree apex_tree(apexes);
  std::vector<double> vertex(m, -std::numeric_limits<double>::infinity());
  std::vector<double> apexr(m, -std::numeric_limits<double>::infinity());
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const double r2 = rho_[j] * rho_[j];
      auto max_over = [&](const BoxTree& tree, const std::vector<Vec>& pts, std::size_t skip, double& best) {
        scan(
            tree,
            [&](const BoxTree::Node& node) {
              const BoxBound bb = box_bound(caps, j, node, 0.0);
              return bb.a_max + eps_ * (bb.d2_max / r2 - 1.0) < best;
            },
            [&](std::size_t i) {
              if (i != skip) best = std::max(best, caps.value(j, pts[i], eps_));
            });
      };
      for (int v : base_.facets()[j].vertices) {
        vertex[j] = std::max(vertex[j], caps.value(j, base_.vertices()[static_cast<std::size_t>(v)], eps_));
      }
      max_over(vertex_tree, base_.vertices(), m + base_.vertices().size(), vertex[j]);
      max_over(apex_tree, apexes, j, apexr[j]);
    }
  });
  return {*std::max_element(vertex.begin(), vertex.end()), *std::max_element(apexr.begin(), apexr.end())};
}

RoundedBody round_polytope(const Polytope& p, const std::vector<Vec>& touch_points, double eps0,
                           const RoundOptions& options) {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw ValidationError("eps0 must be positive");
  check_touch_points(p, touch_points);
  std::vector<double> rho(touch_points.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double circ = 0.0;
    for (int v : p.facets()[i].vertices) {
      circ = std::max(circ, (p.vertices()[static_cast<std::size_t>(v)] - touch_points[i]).norm());
    }
    rho[i] = circ + eps0 / (2.0 * std::sqrt(2.0));
  }
  const Caps caps{&p, &touch_points, &rho};
  const double start = eps0 / std::sqrt(2.0);
  const int cap = options.max_halvings;
  int h = vertex_level(caps, start);
  if (h <= cap) h = apex_level(caps, start, h, cap);
  if (h > cap) {
    throw ConstructionError("round_polytope",
                            "epsilon halving cap of " + std::to_string(cap) + " reached");
  }
  const double eps = std::ldexp(start, -h);
  return RoundedBody(p, touch_points, std::move(rho), eps);
}

}  // namespace vh
