#pragma once

#include "vh/body.hpp"
#include "vh/distance.hpp"
#include "vh/polytope.hpp"
#include "vh/rounded.hpp"
#include "vh/sphere.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace vh {

/// Outcome of the independent checker for the four net properties:
///  (a) F(P, u) is a centrally symmetric facet for every net member u;
///  (b) its facial tangents cover T_u at radius eta;
///  (c) every adjacent facet normal v has Delta(u, v) < eta;
///  (d) no facet is adjacent to the net facets of two distinct members.
struct PropertyReport {
  bool a = false;
  bool b = false;
  bool c = false;
  bool d = false;
  /// Worst asymmetry of a net facet about its centroid.
  double symmetry_error = 0.0;
  /// Worst tangent covering gap.
  double tangent_gap = 0.0;
  /// Largest Delta(u, v) over net facets and their neighbors.
  double adjacency_angle = 0.0;
  /// First failure, empty when all properties hold.
  std::string failure;

  bool all() const noexcept { return a && b && c && d; }
};

/// Consumes only the polytope, the net and eta.
PropertyReport check_properties(const Polytope& p, const EtaNet& net, double eta);

struct ApproxOptions {
  /// Doublings of the dense direction sequence.
  int max_densify = 14;
  /// Halvings of the cap lift.
  int max_lift_halvings = 40;
  /// Halvings of the mixing weight (paired version).
  int max_mix_halvings = 40;
  /// Cap circumradius as a fraction of the in-plane inradius of F(Q, u).
  double cap_fraction = 0.5;
  /// Probe directions for the sampled distance checks.
  std::size_t distance_probes_2d = 720;
  std::size_t distance_probes_3d = 2000;
};

struct ApproxResult {
  Polytope polytope;
  EtaNet net;
  double eta;
  double eps;
  PropertyReport report;
  /// Sampled hausdorff_support(P, K).
  double distance;
  /// Facet index of F(P, u) for every net member, in net order.
  std::vector<int> net_facets;
  double lift;
  std::size_t dense_count;
  /// Mixing weight of the paired construction, 0 for single bodies.
  double mu = 0.0;
};

/// Polytope P with the four net properties and sampled distance to K below
/// eps. Throws ConstructionError naming the failing stage.
ApproxResult approximate_body(const ConvexSet& k, const EtaNet& net, double eta, double eps,
                              const ApproxOptions& options = {});

struct PairReport {
  bool same_normals = false;
  bool translates = false;
  bool mirrored_adjacency = false;
  /// Worst vertex mismatch after centroid alignment of the net facets.
  double translate_error = 0.0;
  std::string failure;

  bool all() const noexcept { return same_normals && translates && mirrored_adjacency; }
};

PairReport check_pair_structure(const Polytope& p1, const Polytope& p2, const EtaNet& net);

struct PairResult {
  ApproxResult first;
  ApproxResult second;
  PairReport pair;
};

/// Approximations of K1, K2 sharing the facet normals, with translate net
/// facets.
PairResult approximate_pair(const ConvexSet& k1, const ConvexSet& k2, const EtaNet& net, double eta, double eps,
                            const ApproxOptions& options = {});

struct TurnWitnessRecord {
  Direction u;
  TangentVector t;
  Direction v_plus;
  Direction v_minus;
  double lambda;
  double mu;
  double beta_plus;
  double gamma_plus;
  double beta_minus;
  double gamma_minus;
  Vec y;
  /// Solver-measured increments and their product.
  double s_plus = 0.0;
  double s_minus = 0.0;
  double product = 0.0;
  /// Product of the same check in direction -t.
  double product_reverse = 0.0;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
};

struct CertifyOptions {
  ApproxOptions approx;
  RoundOptions round;
  /// Minimum relative-interior margin of p, q and their translates.
  double min_margin = 1e-6;
  double residual_tol = 1e-6;
};

struct CertifiedPair {
  Body seed1;
  Body seed2;
  int k;
  int m;
  int j;
  double eps0;
  double eta;
  EtaNet net;
  std::shared_ptr<const RoundedBody> body1;
  std::shared_ptr<const RoundedBody> body2;
  double eps;
  std::vector<TurnWitnessRecord> witnesses;
  double distance1;
  double distance2;
  double max_residual;
  /// All residuals below tolerance, every product positive, distance
  /// budget met.
  bool verified;
};

/// Builds and verifies a pair of rounded bodies whose difference map turns
/// at every net direction in every facial tangent direction, within eps0
/// of the seeds in the sum metric.
CertifiedPair certify_pair(const Body& seed1, const Body& seed2, int k, int m, int j, double eps0,
                           const CertifyOptions& options = {});

/// 0.9 min(1/m, 1/j, arctan(1/k)).
double certify_eta(int k, int m, int j);

}  // namespace vh
