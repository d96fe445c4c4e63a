#include "vh/constructions.hpp"

#include "vh/errors.hpp"
#include "vh/parallel.hpp"
#include "vh/reverse_gauss.hpp"
#include "vh/tameness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vh {

namespace {

std::string where(const Direction& u, const Vec& t) {
  std::ostringstream out;
  out.precision(6);
  out << "u = (";
  for (int i = 0; i < u.dim(); ++i) out << (i ? ", " : "") << u[i];
  out << "), t = (";
  for (Eigen::Index i = 0; i < t.size(); ++i) out << (i ? ", " : "") << t[i];
  out << ')';
  return out.str();
}

Vec mean_of(const Polytope& p, const std::vector<int>& ids) {
  Vec c = Vec::Zero(p.dim());
  for (int v : ids) c += p.vertices()[static_cast<std::size_t>(v)];
  return c / static_cast<double>(ids.size());
}

/// Farthest reach of the facet from `from` along s.
double extent_along(const Polytope& p, int facet, const Vec& from, const Vec& s) {
  double best = 0.0;
  for (int v : p.facet(facet).vertices) best = std::max(best, (p.vertices()[static_cast<std::size_t>(v)] - from).dot(s));
  return best;
}

/// One side (v+ or v-) of a facial tangent pair. The in-facet step
/// direction s leaves the shared face G into F(P1, v) and F(P2, v).
struct Side {
  int f1;
  int f2;
  Direction v;
  Vec g;
  Vec s;
  double alpha;
  double c;
};

Side make_side(const Polytope& p1, const Polytope& p2, int u1, int u2, const FacialTangent& ft, const Vec& y,
               double sign, double min_margin, const Direction& u, const Vec& t) {
  Side side{ft.neighbor.index, -1, ft.neighbor.normal, Vec(), Vec(), 0.0, 0.0};
  const auto partner = p2.find_facet(side.v);
  if (!partner || !p2.adjacent(u2, *partner)) {
    throw ConstructionError("certify_pair", where(u, t) + ": adjacent facet has no partner in the second polytope");
  }
  side.f2 = *partner;
  side.g = mean_of(p1, p1.shared_vertices(u1, side.f1));
  side.alpha = sphere_distance(u, side.v);
  side.s = -std::sin(side.alpha) * u.vec() + sign * std::cos(side.alpha) * t;
  const double reach = std::min(extent_along(p1, side.f1, side.g, side.s), extent_along(p2, side.f2, side.g + y, side.s));
  double c = 0.25 * reach;
  for (int h = 0; h < 80; ++h, c *= 0.5) {
    const Vec p = side.g + c * side.s;
    const Vec q = side.g + 2.0 * c * side.s;
    const double margin = std::min({relint_margin(p1, side.f1, p), relint_margin(p1, side.f1, q),
                                    relint_margin(p2, side.f2, p + y), relint_margin(p2, side.f2, q + y)});
    if (margin >= min_margin) {
      side.c = c;
      return side;
    }
  }
  throw ConstructionError("certify_pair", where(u, t) + ": no step keeps p and q inside both facets");
}

double sampled_pair_distance(const Body& k, const Body& seed, const EtaNet& net, std::size_t probes) {
  std::vector<Direction> dirs = spiral_directions(net.dim, probes);
  dirs.insert(dirs.end(), net.members.begin(), net.members.end());
  return hausdorff_support(ConvexSet(k), ConvexSet(seed), dirs);
}

}  // namespace

double certify_eta(int k, int m, int j) {
  if (k < 1 || m < 1 || j < 1) throw ValidationError("k, m and j must be positive integers");
  return 0.9 * std::min({1.0 / m, 1.0 / j, std::atan(1.0 / k)});
}

CertifiedPair certify_pair(const Body& seed1, const Body& seed2, int k, int m, int j, double eps0,
                           const CertifyOptions& options) {
  if (!(eps0 > 0.0)) throw ValidationError("eps0 must be positive");
  if (!is_strictly_convex(seed1) || !is_strictly_convex(seed2)) {
    throw ValidationError("certify_pair needs strictly convex seeds");
  }
  const int n = seed1.dim();
  if (seed2.dim() != n) throw ValidationError("seed dimensions differ");
  if (n != 2 && n != 3) throw ValidationError("certify_pair supports dimensions 2 and 3");
  const double eta = certify_eta(k, m, j);
  const EtaNet net = build_eta_net(n, eta);

  PairResult pair = approximate_pair(ConvexSet(seed1), ConvexSet(seed2), net, eta, eps0 / 4.0, options.approx);
  const Polytope& p1 = pair.first.polytope;
  const Polytope& p2 = pair.second.polytope;

  std::vector<Vec> z1(p1.facet_count());
  std::vector<Vec> z2(p2.facet_count());
  std::vector<bool> set1(p1.facet_count(), false);
  std::vector<bool> set2(p2.facet_count(), false);
  for (std::size_t i = 0; i < p1.facet_count(); ++i) z1[i] = p1.facet_centroid(static_cast<int>(i));
  for (std::size_t i = 0; i < p2.facet_count(); ++i) z2[i] = p2.facet_centroid(static_cast<int>(i));
  auto assign = [](std::vector<Vec>& z, std::vector<bool>& set, int f, const Vec& value, const std::string& ctx) {
    const auto i = static_cast<std::size_t>(f);
    if (set[i]) throw ConstructionError("certify_pair", ctx + ": touch point assigned twice");
    z[i] = value;
    set[i] = true;
  };

  std::vector<TurnWitnessRecord> witnesses;
  for (std::size_t a = 0; a < net.members.size(); ++a) {
    const Direction& u = net.members[a];
    const int u1 = pair.first.net_facets[a];
    const int u2 = pair.second.net_facets[a];
    if (u1 < 0 || u2 < 0) throw ConstructionError("certify_pair", "net facet missing after approximation");
    const Vec y = p2.facet_centroid(u2) - p1.facet_centroid(u1);
    assign(z1, set1, u1, p1.facet_centroid(u1), "net facet");
    assign(z2, set2, u2, z1[static_cast<std::size_t>(u1)] + y, "net facet");

    const auto tangents = facial_tangents(p1, p1.facet_ref(u1));
    std::vector<bool> used(tangents.size(), false);
    for (std::size_t i = 0; i < tangents.size(); ++i) {
      if (used[i]) continue;
      const Vec t = tangents[i].tangent.vec();
      std::size_t opposite = tangents.size();
      for (std::size_t r = 0; r < tangents.size(); ++r) {
        if (!used[r] && r != i && (tangents[r].tangent.vec() + t).norm() < 1e-7) opposite = r;
      }
      if (opposite == tangents.size()) {
        throw ConstructionError("certify_pair", where(u, t) + ": facial tangent has no opposite");
      }
      used[i] = used[opposite] = true;

      const Side plus = make_side(p1, p2, u1, u2, tangents[i], y, 1.0, options.min_margin, u, t);
      const Side minus = make_side(p1, p2, u1, u2, tangents[opposite], y, -1.0, options.min_margin, u, t);
      const std::string ctx = where(u, t);
      // z1(v+) = p+, z2(v+) = q+ + y, z1(v-) = q-, z2(v-) = p- + y.
      assign(z1, set1, plus.f1, plus.g + plus.c * plus.s, ctx);
      assign(z2, set2, plus.f2, plus.g + 2.0 * plus.c * plus.s + y, ctx);
      assign(z1, set1, minus.f1, minus.g + 2.0 * minus.c * minus.s, ctx);
      assign(z2, set2, minus.f2, minus.g + minus.c * minus.s + y, ctx);

      TurnWitnessRecord w{u,
                          TangentVector(u, t),
                          plus.v,
                          minus.v,
                          std::tan(plus.alpha),
                          std::tan(minus.alpha),
                          plus.c * std::sin(plus.alpha),
                          plus.c * std::cos(plus.alpha),
                          minus.c * std::sin(minus.alpha),
                          minus.c * std::cos(minus.alpha),
                          y};
      witnesses.push_back(std::move(w));
    }
  }

  const RoundedBody r1 = round_polytope(p1, z1, eps0 / 4.0, options.round);
  const RoundedBody r2 = round_polytope(p2, z2, eps0 / 4.0, options.round);
  const double eps = std::min(r1.epsilon(), r2.epsilon());
  auto body1 = std::make_shared<const RoundedBody>(p1, z1, r1.rho(), eps);
  auto body2 = std::make_shared<const RoundedBody>(p2, z2, r2.rho(), eps);

  const VirtualBody pair_body(Body::rounded(body1), Body::rounded(body2));
  const DirectionMap x = map_of(pair_body);
  parallel_for(witnesses.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      TurnWitnessRecord& w = witnesses[i];
      try {
        const PairCheck forward = check_pair(x, w.u, w.t, w.lambda, w.mu);
        const PairCheck reverse = check_pair(x, w.u, -w.t, w.mu, w.lambda);
        w.s_plus = forward.s_plus;
        w.s_minus = forward.s_minus;
        w.product = forward.product;
        w.product_reverse = reverse.product;
        w.residual_plus = std::abs(forward.s_plus + w.gamma_plus);
        w.residual_minus = std::abs(forward.s_minus + w.gamma_minus);
      } catch (const SolverError& e) {
        throw ConstructionError("certify_pair", where(w.u, w.t.vec()) + ": solver failed: " + e.what());
      }
    }
  });

  const std::size_t probes = n == 2 ? options.approx.distance_probes_2d : options.approx.distance_probes_3d;
  const double d1 = sampled_pair_distance(Body::rounded(body1), seed1, net, probes);
  const double d2 = sampled_pair_distance(Body::rounded(body2), seed2, net, probes);

  double max_residual = 0.0;
  bool ok = d1 + d2 <= eps0;
  for (const auto& w : witnesses) {
    max_residual = std::max({max_residual, w.residual_plus, w.residual_minus});
    ok = ok && w.product > kTurnThreshold && w.product_reverse > kTurnThreshold;
    ok = ok && w.lambda < 1.0 / k && w.mu < 1.0 / k;
  }
  ok = ok && max_residual <= options.residual_tol;

  return CertifiedPair{seed1, seed2, k, m, j, eps0, eta, net, body1, body2, eps, std::move(witnesses),
                       d1, d2, max_residual, ok};
}

}  // namespace vh
