#include "vh/reverse_gauss.hpp"

#include "vh/errors.hpp"

#include <cmath>

namespace vh {

namespace {

Vec point_of(const Body& b, const Direction& u, const SolverOptions& options) {
  const Vec& d = u.vec();
  if (const auto* ball = b.get_if<Ball>()) return ball->center + ball->radius * d;
  if (const auto* e = b.get_if<Ellipsoid>()) {
    const Vec a2u = e->semi_axes.cwiseProduct(e->semi_axes).cwiseProduct(d);
    return e->center + a2u / e->semi_axes.cwiseProduct(d).norm();
  }
  if (const auto* s = b.get_if<MinkowskiSum>()) {
    Vec x = Vec::Zero(b.dim());
    for (const auto& part : s->parts) x += point_of(part, u, options);
    return x;
  }
  if (const auto* p = b.get_if<ParallelBody>()) {
    const Body* inner = std::get_if<Body>(p->inner.get());
    if (!inner) throw ValidationError("parallel body of a polytope is not strictly convex");
    return point_of(*inner, u, options) + p->radius * d;
  }
  return solve_rounded(*b.as_rounded(), u, options).point;
}

}  // namespace

SupportPoint reverse_gauss_point(const Body& b, const Direction& u, const SolverOptions& options) {
  if (u.dim() != b.dim()) throw ValidationError("direction dimension does not match the body");
  if (!is_strictly_convex(b)) throw ValidationError("reverse Gauss point needs a strictly convex body");
  if (const RoundedBody* r = b.as_rounded()) return solve_rounded(*r, u, options);
  Vec x = point_of(b, u, options);
  const double h = x.dot(u.vec());
  return SupportPoint{u, std::move(x), h};
}

VirtualBody::VirtualBody(Body first, Body second) : first_(std::move(first)), second_(std::move(second)) {
  if (first_.dim() != second_.dim()) throw ValidationError("virtual body parts differ in dimension");
  if (!is_strictly_convex(first_) || !is_strictly_convex(second_)) {
    throw ValidationError("virtual body parts must be strictly convex");
  }
}

Vec virtual_point(const VirtualBody& v, const Direction& u, const SolverOptions& options) {
  return reverse_gauss_point(v.first(), u, options).point - reverse_gauss_point(v.second(), u, options).point;
}

double continuity_probe(const Body& b, const Direction& u, double h, int samples, const SolverOptions& options) {
  if (!(h > 0.0)) throw ValidationError("continuity probe step must be positive");
  const Vec x0 = reverse_gauss_point(b, u, options).point;
  const auto basis = tangent_basis(u);
  double worst = 0.0;
  const int count = u.dim() == 2 ? 2 : std::max(samples, 1);
  for (int k = 0; k < count; ++k) {
    Vec t;
    if (u.dim() == 2) {
      t = (k == 0 ? 1.0 : -1.0) * basis[0].vec();
    } else {
      const double phi = 2.0 * kPi * k / count;
      t = std::cos(phi) * basis[0].vec() + std::sin(phi) * basis[1].vec();
    }
    const Direction v(Vec(std::cos(h) * u.vec() + std::sin(h) * t));
    worst = std::max(worst, (reverse_gauss_point(b, v, options).point - x0).norm());
  }
  return worst;
}

}  // namespace vh
