#include "vh/body.hpp"

#include "vh/errors.hpp"
#include "vh/reverse_gauss.hpp"
#include "vh/rounded.hpp"

#include <cmath>

namespace vh {

namespace {

void require_body_dim(int dim) {
  if (dim != 2 && dim != 3) throw ValidationError("body dimension must be 2 or 3");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Body Body::ball(const Vec& center, double radius) {
  require_body_dim(static_cast<int>(center.size()));
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("ball radius must be positive");
  return Body(Ball{center, radius});
}

Body Body::ellipsoid(const Vec& center, const Vec& semi_axes) {
  require_body_dim(static_cast<int>(center.size()));
  if (semi_axes.size() != center.size()) throw ValidationError("ellipsoid semi-axes dimension mismatch");
  for (Eigen::Index i = 0; i < semi_axes.size(); ++i) {
    if (!(semi_axes[i] > 0.0) || !std::isfinite(semi_axes[i])) {
      throw ValidationError("ellipsoid semi-axes must be positive");
    }
  }
  return Body(Ellipsoid{center, semi_axes});
}

Body Body::sum(std::vector<Body> parts) {
  if (parts.empty()) throw ValidationError("Minkowski sum needs at least one part");
  const int dim = parts.front().dim();
  for (const auto& p : parts) {
    if (p.dim() != dim) throw ValidationError("Minkowski sum parts differ in dimension");
  }
  return Body(MinkowskiSum{std::move(parts)});
}

Body Body::parallel(const Polytope& inner, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("parallel body radius must be positive");
  return Body(ParallelBody{std::make_shared<const std::variant<Polytope, Body>>(inner), radius});
}

Body Body::parallel(const Body& inner, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("parallel body radius must be positive");
  return Body(ParallelBody{std::make_shared<const std::variant<Polytope, Body>>(inner), radius});
}

Body Body::rounded(RoundedBody body) { return rounded(std::make_shared<const RoundedBody>(std::move(body))); }

Body Body::rounded(std::shared_ptr<const RoundedBody> body) {
  if (!body) throw ValidationError("null rounded body");
  return Body(std::move(body));
}

const RoundedBody* Body::as_rounded() const {
  const auto* p = std::get_if<std::shared_ptr<const RoundedBody>>(node_.get());
  return p ? p->get() : nullptr;
}

int Body::dim() const {
  return std::visit(Overloaded{
                        [](const Ball& b) { return static_cast<int>(b.center.size()); },
                        [](const Ellipsoid& e) { return static_cast<int>(e.center.size()); },
                        [](const MinkowskiSum& s) { return s.parts.front().dim(); },
                        [](const ParallelBody& p) {
                          return std::visit(Overloaded{[](const Polytope& q) { return q.dim(); },
                                                       [](const Body& b) { return b.dim(); }},
                                            *p.inner);
                        },
                        [](const std::shared_ptr<const RoundedBody>& r) { return r->dim(); },
                    },
                    *node_);
}

double support_value(const Body& b, const Direction& u) {
  if (u.dim() != b.dim()) throw ValidationError("direction dimension does not match the body");
  return std::visit(
      Overloaded{
          [&](const Ball& ball) { return ball.center.dot(u.vec()) + ball.radius; },
          [&](const Ellipsoid& e) {
            return e.center.dot(u.vec()) + e.semi_axes.cwiseProduct(u.vec()).norm();
          },
          [&](const MinkowskiSum& s) {
            double h = 0.0;
            for (const auto& part : s.parts) h += support_value(part, u);
            return h;
          },
          [&](const ParallelBody& p) {
            const double inner = std::visit(Overloaded{[&](const Polytope& q) { return support_value(q, u); },
                                                       [&](const Body& k) { return support_value(k, u); }},
                                            *p.inner);
            return inner + p.radius;
          },
          [&](const std::shared_ptr<const RoundedBody>& r) { return solve_rounded(*r, u).support; },
      },
      b.node());
}

bool is_strictly_convex(const Body& b) {
  return std::visit(Overloaded{
                        [](const Ball&) { return true; },
                        [](const Ellipsoid&) { return true; },
                        [](const MinkowskiSum& s) {
                          for (const auto& p : s.parts) {
                            if (!is_strictly_convex(p)) return false;
                          }
                          return true;
                        },
                        [](const ParallelBody& p) {
                          const Body* inner = std::get_if<Body>(p.inner.get());
                          return inner != nullptr && is_strictly_convex(*inner);
                        },
                        [](const std::shared_ptr<const RoundedBody>&) { return true; },
                    },
                    b.node());
}

}  // namespace vh
