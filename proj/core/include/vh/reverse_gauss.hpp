#pragma once

#include "vh/body.hpp"
#include "vh/rounded.hpp"
#include "vh/sphere.hpp"

#include <string>
#include <vector>

namespace vh {

struct SupportPoint {
  Direction direction;
  Vec point;
  double support;
};

struct SolverOptions {
  /// Try single-cap closed-form maximizers before cutting planes.
  bool warm_start = true;
  int max_iterations = 2000;
  /// Kelley stopping rules.
  double violation_tol = 1e-10;
  double decrement_tol = 1e-12;
  /// Constraints seeded into the working set, ranked by <u, u_j>.
  int working_set = 24;
  /// Global feasibility tolerance of the returned point.
  double feasibility_tol = 1e-11;
};

/// Diagnostics of one rounded-body solve.
struct SolverReport {
  enum class Route { kClosedForm, kKkt, kKelley };
  Route route = Route::kClosedForm;
  int iterations = 0;
  /// Constraints active at the optimum.
  std::vector<int> active;
  std::vector<double> multipliers;
  /// Smallest eigenvalue of the Lagrangian Hessian on the tangent space of
  /// the active constraints. Positive values certify a unique maximizer.
  double second_order = 0.0;
  /// Upper bound from the outer relaxation minus the returned objective.
  double gap = 0.0;
  /// Diameter of the optimal face of the final outer polytope (Kelley
  /// route only; stays large on flat caps, kept as a diagnostic).
  double outer_face_diameter = 0.0;
  double max_violation = 0.0;
};

/// Maximizes <x, u> over a rounded body.
SupportPoint solve_rounded(const RoundedBody& rb, const Direction& u, const SolverOptions& options = {},
                           SolverReport* report = nullptr);

/// x_B(u) with its support value. Closed forms for analytic bodies, sums of
/// parts for Minkowski sums, the solver for rounded bodies. Throws
/// ValidationError for bodies that are not strictly convex, SolverError
/// when the solver does not converge.
SupportPoint reverse_gauss_point(const Body& b, const Direction& u, const SolverOptions& options = {});

/// Ordered pair (K, L) of strictly convex bodies.
class VirtualBody {
 public:
  VirtualBody(Body first, Body second);
  const Body& first() const noexcept { return first_; }
  const Body& second() const noexcept { return second_; }
  int dim() const { return first_.dim(); }

 private:
  Body first_;
  Body second_;
};

/// x_K(u) - x_L(u).
Vec virtual_point(const VirtualBody& v, const Direction& u, const SolverOptions& options = {});

/// max |x_B(u') - x_B(u)| over `samples` directions u' at distance h from u.
double continuity_probe(const Body& b, const Direction& u, double h, int samples = 64,
                        const SolverOptions& options = {});

}  // namespace vh
