#include "vh/constructions.hpp"

#include "vh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vh {

namespace {

ConvexSet outer_body(const ConvexSet& k, double r) {
  return std::visit([r](const auto& x) -> ConvexSet { return Body::parallel(x, r); }, k);
}

double sampled_distance(const Polytope& p, const ConvexSet& k, const ApproxOptions& o) {
  EtaNet base{p.dim(), 0.0, spiral_directions(p.dim(), p.dim() == 2 ? o.distance_probes_2d : o.distance_probes_3d)};
  const auto sample = distance_sample(p, base);
  return hausdorff_support(ConvexSet(p), k, sample);
}

/// Intersection of the supporting halfspaces of L at the net directions and
/// at a prefix of the dense sequence. Dense directions closer than half
/// their spacing to a net member are skipped so the net facets keep a
/// definite size.
Polytope build_q(const ConvexSet& l, const EtaNet& net, std::size_t dense_count) {
  const int n = net.dim;
  std::vector<Halfspace> hs;
  for (const auto& u : net.members) hs.push_back({u, support_value(l, u)});
  const double spacing = n == 2 ? 2.0 * kPi / static_cast<double>(dense_count)
                                : std::sqrt(4.0 * kPi / static_cast<double>(dense_count));
  for (const auto& z : spiral_directions(n, dense_count)) {
    double nearest = kPi;
    for (const auto& u : net.members) nearest = std::min(nearest, sphere_distance(z, u));
    if (nearest < 0.5 * spacing) continue;
    hs.push_back({z, support_value(l, z)});
  }
  return halfspace_intersection(n, hs);
}

struct QStage {
  Polytope q;
  std::size_t dense;
  double distance;
};

QStage densify(const ConvexSet& k, const ConvexSet& l, const EtaNet& net, double eps, std::size_t start,
               const ApproxOptions& o) {
  std::size_t count = start;
  double last = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= o.max_densify; ++round) {
    Polytope q = build_q(l, net, count);
    last = sampled_distance(q, k, o);
    if (last < 0.5 * eps) return QStage{std::move(q), count, last};
    count *= 2;
  }
  throw ConstructionError("approximate_body", "dense halfspace stage: sampled distance " + std::to_string(last) +
                                                  " still >= eps/2 after " + std::to_string(o.max_densify) +
                                                  " doublings");
}

/// Geometry of the net facet F(Q, u) used to place and lift the cap.
struct NetFacet {
  Vec center;
  double inradius;
  double min_dihedral;
};

std::vector<NetFacet> net_facets_of(const Polytope& q, const EtaNet& net) {
  std::vector<NetFacet> out;
  for (const auto& u : net.members) {
    const auto f = q.find_facet(u, 1e-12);
    if (!f) throw ConstructionError("approximate_body", "net direction lost its facet in Q");
    const Vec c = q.facet_centroid(*f);
    double dihedral = kPi;
    for (int nb : q.neighbors(*f)) dihedral = std::min(dihedral, sphere_distance(u, q.facet(nb).normal));
    out.push_back({c, relint_margin(q, *f, c), dihedral});
  }
  return out;
}

/// Centrally symmetric cap around the origin of the facet plane: a segment
/// (n = 2) or a regular 2m-gon with m >= ceil(pi / eta) (n = 3), with
/// the given circumradius and an orientation fixed by tangent_basis(u).
std::vector<Vec> cap_shape(const Direction& u, double radius, double eta) {
  const auto basis = tangent_basis(u);
  if (u.dim() == 2) return {Vec(radius * basis[0].vec()), Vec(-radius * basis[0].vec())};
  const int m = std::max(2, static_cast<int>(std::ceil(kPi / eta - 1e-12)));
  std::vector<Vec> out;
  for (int k = 0; k < 2 * m; ++k) {
    const double phi = (k + 0.5) * kPi / m;
    out.push_back(Vec(radius * (std::cos(phi) * basis[0].vec() + std::sin(phi) * basis[1].vec())));
  }
  return out;
}

/// Largest lift keeping neighbor slopes below eta/2 and the cap below the
/// neighboring facet planes of Q.
double initial_lift(const NetFacet& f, double radius, double eta) {
  const double gap = f.inradius - radius;
  return gap * std::min(std::tan(0.5 * eta), 0.5 * std::tan(std::min(f.min_dihedral, 1.5)));
}

Polytope lift_caps(const Polytope& q, const EtaNet& net, const std::vector<NetFacet>& facets,
                   const std::vector<double>& radius, double eta, double lift) {
  std::vector<Vec> points = q.vertices();
  for (std::size_t k = 0; k < net.members.size(); ++k) {
    const Vec top = facets[k].center + lift * net.members[k].vec();
    for (const auto& off : cap_shape(net.members[k], radius[k], eta)) points.push_back(top + off);
  }
  return convex_hull(points);
}

std::vector<int> locate_net_facets(const Polytope& p, const EtaNet& net) {
  std::vector<int> out;
  for (const auto& u : net.members) {
    const auto f = p.find_facet(u);
    out.push_back(f ? *f : -1);
  }
  return out;
}

void require_inputs(const ConvexSet& k, const EtaNet& net, double eta, double eps) {
  if (net.members.empty()) throw ValidationError("approximation needs a nonempty net");
  if (dim_of(k) != net.dim) throw ValidationError("net and body dimensions differ");
  if (!(eta > 0.0) || !(eta < kPi / 2)) throw ValidationError("eta must lie in (0, pi/2)");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
}

Polytope with_normals(const Polytope& p, const std::vector<Direction>& normals) {
  std::vector<Facet> facets = p.facets();
  for (std::size_t f = 0; f < facets.size(); ++f) {
    facets[f].normal = normals[f];
    double offset = 0.0;
    for (int v : facets[f].vertices) offset += p.vertices()[static_cast<std::size_t>(v)].dot(normals[f].vec());
    facets[f].offset = offset / static_cast<double>(facets[f].vertices.size());
  }
  return Polytope(p.dim(), p.vertices(), std::move(facets));
}

/// Gives matching facets of the two mixed polytopes one common normal,
/// the net member itself for net facets. Both share a normal fan, so the
/// computed normals differ only by rounding; on very flat caps that
/// rounding would otherwise move the support points visibly.
bool share_normals(Polytope& p1, Polytope& p2, const EtaNet& net) {
  if (p1.facet_count() != p2.facet_count()) return false;
  std::vector<Direction> n1;
  std::vector<Direction> n2(p2.facet_count(), Direction(p2.facet(0).normal));
  std::vector<bool> hit(p2.facet_count(), false);
  for (std::size_t f = 0; f < p1.facet_count(); ++f) {
    const Direction& a = p1.facet(static_cast<int>(f)).normal;
    const auto g = p2.find_facet(a);
    if (!g || hit[static_cast<std::size_t>(*g)]) return false;
    hit[static_cast<std::size_t>(*g)] = true;
    n1.emplace_back(Vec(a.vec() + p2.facet(*g).normal.vec()));
    n2[static_cast<std::size_t>(*g)] = n1.back();
  }
  for (const auto& u : net.members) {
    const auto f = p1.find_facet(u);
    const auto g = p2.find_facet(u);
    if (!f || !g) return false;
    n1[static_cast<std::size_t>(*f)] = u;
    n2[static_cast<std::size_t>(*g)] = u;
  }
  p1 = with_normals(p1, n1);
  p2 = with_normals(p2, n2);
  return true;
}

std::size_t initial_dense(const EtaNet& net) { return std::max<std::size_t>(16, 2 * net.members.size()); }

}  // namespace

ApproxResult approximate_body(const ConvexSet& k, const EtaNet& net, double eta, double eps,
                              const ApproxOptions& options) {
  require_inputs(k, net, eta, eps);
  const ConvexSet l = outer_body(k, eps / 8.0);
  QStage q = densify(k, l, net, eps, initial_dense(net), options);
  const auto facets = net_facets_of(q.q, net);
  std::vector<double> radius;
  double lift = std::numeric_limits<double>::infinity();
  for (const auto& f : facets) {
    radius.push_back(options.cap_fraction * f.inradius);
    lift = std::min(lift, initial_lift(f, radius.back(), eta));
  }
  std::string last_failure;
  for (int h = 0; h <= options.max_lift_halvings; ++h, lift *= 0.5) {
    Polytope p = lift_caps(q.q, net, facets, radius, eta, lift);
    PropertyReport report = check_properties(p, net, eta);
    const double dist = sampled_distance(p, k, options);
    if (report.all() && dist < eps) {
      ApproxResult r{std::move(p), net, eta, eps, report, dist, {}, lift, q.dense, 0.0};
      r.net_facets = locate_net_facets(r.polytope, net);
      return r;
    }
    last_failure = report.all() ? "distance " + std::to_string(dist) + " >= eps" : report.failure;
  }
  throw ConstructionError("approximate_body", "lift halving cap reached; last failure: " + last_failure);
}

PairResult approximate_pair(const ConvexSet& k1, const ConvexSet& k2, const EtaNet& net, double eta, double eps,
                            const ApproxOptions& options) {
  require_inputs(k1, net, eta, eps);
  require_inputs(k2, net, eta, eps);
  const ConvexSet l1 = outer_body(k1, eps / 8.0);
  const ConvexSet l2 = outer_body(k2, eps / 8.0);
  QStage q1 = densify(k1, l1, net, eps, initial_dense(net), options);
  QStage q2 = densify(k2, l2, net, eps, initial_dense(net), options);
  // A common dense prefix keeps the two constructions parallel.
  if (q1.dense < q2.dense) q1 = densify(k1, l1, net, eps, q2.dense, options);
  if (q2.dense < q1.dense) q2 = densify(k2, l2, net, eps, q1.dense, options);

  const auto f1 = net_facets_of(q1.q, net);
  const auto f2 = net_facets_of(q2.q, net);
  std::vector<double> radius;
  double lift = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f1.size(); ++i) {
    radius.push_back(options.cap_fraction * std::min(f1[i].inradius, f2[i].inradius));
    lift = std::min({lift, initial_lift(f1[i], radius.back(), eta), initial_lift(f2[i], radius.back(), eta)});
  }

  std::string last_failure;
  for (int h = 0; h <= options.max_lift_halvings; ++h, lift *= 0.5) {
    Polytope b1 = lift_caps(q1.q, net, f1, radius, eta, lift);
    Polytope b2 = lift_caps(q2.q, net, f2, radius, eta, lift);
    const PropertyReport r1 = check_properties(b1, net, eta);
    const PropertyReport r2 = check_properties(b2, net, eta);
    if (!r1.all() || !r2.all()) {
      last_failure = !r1.all() ? r1.failure : r2.failure;
      continue;
    }
    double mu = 0.5;
    for (int g = 0; g <= options.max_mix_halvings; ++g, mu *= 0.5) {
      Polytope p1 = minkowski_combine(b1, b2, mu);
      Polytope p2 = minkowski_combine(b2, b1, mu);
      const double d1 = sampled_distance(p1, k1, options);
      const double d2 = sampled_distance(p2, k2, options);
      if (!(d1 < eps) || !(d2 < eps)) {
        last_failure = "mixed distance " + std::to_string(std::max(d1, d2)) + " >= eps";
        continue;
      }
      if (!share_normals(p1, p2, net)) {
        last_failure = "mixed polytopes have different normal fans";
        continue;
      }
      PropertyReport s1 = check_properties(p1, net, eta);
      PropertyReport s2 = check_properties(p2, net, eta);
      PairReport pr = check_pair_structure(p1, p2, net);
      if (!s1.all() || !s2.all() || !pr.all()) {
        last_failure = !s1.all() ? s1.failure : (!s2.all() ? s2.failure : pr.failure);
        continue;
      }
      PairResult out{ApproxResult{std::move(p1), net, eta, eps, s1, d1, {}, lift, q1.dense, mu},
                     ApproxResult{std::move(p2), net, eta, eps, s2, d2, {}, lift, q2.dense, mu}, pr};
      out.first.net_facets = locate_net_facets(out.first.polytope, net);
      out.second.net_facets = locate_net_facets(out.second.polytope, net);
      return out;
    }
    throw ConstructionError("approximate_pair", "mixing halving cap reached; last failure: " + last_failure);
  }
  throw ConstructionError("approximate_pair", "lift halving cap reached; last failure: " + last_failure);
}

}  // namespace vh
