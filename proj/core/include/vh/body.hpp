#pragma once

#include "vh/polytope.hpp"
#include "vh/sphere.hpp"
#include "vh/vec.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace vh {

class Body;
class RoundedBody;

struct Ball {
  Vec center;
  double radius;
};

struct Ellipsoid {
  Vec center;
  /// Semi-axis lengths along the coordinate axes.
  Vec semi_axes;
};

struct MinkowskiSum {
  std::vector<Body> parts;
};

/// Outer parallel body inner + r B^n.
struct ParallelBody {
  std::shared_ptr<const std::variant<Polytope, Body>> inner;
  double radius;
};

/// Immutable convex body handle. Copies share the same node.
class Body {
 public:
  using Node = std::variant<Ball, Ellipsoid, MinkowskiSum, ParallelBody, std::shared_ptr<const RoundedBody>>;

  static Body ball(const Vec& center, double radius);
  static Body ellipsoid(const Vec& center, const Vec& semi_axes);
  static Body sum(std::vector<Body> parts);
  static Body parallel(const Polytope& inner, double radius);
  static Body parallel(const Body& inner, double radius);
  static Body rounded(RoundedBody body);
  static Body rounded(std::shared_ptr<const RoundedBody> body);

  const Node& node() const { return *node_; }
  int dim() const;

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(node_.get());
  }
  const RoundedBody* as_rounded() const;

 private:
  explicit Body(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}
  std::shared_ptr<const Node> node_;
};

/// h_B(u). Rounded bodies go through the support-point solver.
double support_value(const Body& b, const Direction& u);

/// Every support set is a single point (Ball, Ellipsoid, Rounded, sums and
/// parallel bodies built from those).
bool is_strictly_convex(const Body& b);

}  // namespace vh
