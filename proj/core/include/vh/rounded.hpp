#pragma once

#include "vh/polytope.hpp"
#include "vh/vec.hpp"

#include <vector>

namespace vh {

/**
 * Strictly convex body K = intersection over facets i of the sets
 * M_i = { z_i + w - h u_i : w orthogonal to u_i, h >= eps (|w|^2 / rho_i^2 - 1) },
 * one paraboloid "cap" per facet of a base polytope. Each M_i is the
 * epigraph (in direction -u_i) of f(w) = eps (|w|/rho_i)^2 - eps over the
 * facet hyperplane; C_i is the disc of radius rho_i about z_i.
 *
 * The constructor validates the rounding invariants: every base vertex lies
 * in every M_j and every apex z_i + eps u_i lies in every M_j.
 */
class RoundedBody {
 public:
  RoundedBody(Polytope base, std::vector<Vec> touch_points, std::vector<double> rho, double epsilon);

  int dim() const noexcept { return base_.dim(); }
  const Polytope& base() const noexcept { return base_; }
  const std::vector<Vec>& touch_points() const noexcept { return touch_; }
  const std::vector<double>& rho() const noexcept { return rho_; }
  double epsilon() const noexcept { return eps_; }
  std::size_t constraint_count() const noexcept { return touch_.size(); }

  /// Profile function of facet i at p: f(w) - h; <= 0 iff p in M_i.
  double profile_value(int i, const Vec& p) const;
  Vec profile_gradient(int i, const Vec& p) const;
  /// The Hessian is (2 eps / rho_i^2) times the projector onto u_i^perp.
  double curvature(int i) const { return 2.0 * eps_ / (rho_[idx(i)] * rho_[idx(i)]); }

  /// max_j profile_value(j, p) and the maximizing index.
  double max_violation(const Vec& p, int* argmax = nullptr) const;

  /// Apex z_i + eps u_i, the support point in direction u_i.
  Vec apex(int i) const;

  /// Largest vertex residual over all constraints and largest residual of
  /// apexes against foreign constraints.
  struct Residuals {
    double vertex;
    double apex;
  };
  Residuals residuals() const;

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  Polytope base_;
  std::vector<Vec> touch_;
  std::vector<double> rho_;
  double eps_;
};

struct RoundOptions {
  int max_halvings = 60;
};

/// Rounds P into a strictly convex body with x_K(u_i) = z_i + eps u_i.
/// C_i is the disc about z_i of radius (circumradius of F_i about z_i) +
/// eps0 / (2 sqrt 2); eps is halved from eps0 / sqrt 2 until the rounding
/// invariants hold. Throws ValidationError when a touch point is not in the
/// relative interior of its facet, ConstructionError when the halving cap
/// is reached.
RoundedBody round_polytope(const Polytope& p, const std::vector<Vec>& touch_points, double eps0,
                           const RoundOptions& options = {});

/// profile_value as a free function, matching the constraint notation.
inline double profile_value(const RoundedBody& rb, int facet, const Vec& p) {
  return rb.profile_value(facet, p);
}

}  // namespace vh
