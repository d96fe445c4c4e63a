#include "vh/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace vh {

namespace {

std::string dir_str(const Direction& u) {
  std::ostringstream out;
  out.precision(6);
  out << '(';
  for (int i = 0; i < u.dim(); ++i) out << (i ? ", " : "") << u[i];
  out << ')';
  return out.str();
}

double scale_of(const Polytope& p) {
  double s = 1.0;
  for (const auto& v : p.vertices()) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

/// Max over x of the distance from 2c - x to the nearest point of the set.
double asymmetry(const std::vector<Vec>& pts) {
  Vec c = Vec::Zero(pts.front().size());
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double worst = 0.0;
  for (const auto& p : pts) {
    const Vec mirror = 2.0 * c - p;
    double best = 1e300;
    for (const auto& q : pts) best = std::min(best, (q - mirror).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

PropertyReport check_properties(const Polytope& p, const EtaNet& net, double eta) {
  PropertyReport r;
  r.a = r.b = r.c = r.d = true;
  const double tol = kPlaneTolerance * scale_of(p);
  auto fail = [&](bool& flag, const std::string& why) {
    flag = false;
    if (r.failure.empty()) r.failure = why;
  };
  std::vector<int> net_facet(net.members.size(), -1);
  for (std::size_t k = 0; k < net.members.size(); ++k) {
    const Direction& u = net.members[k];
    const auto face = support_face(p, u, tol);
    const auto f = p.find_facet(u);
    if (!f || p.facet(*f).vertices.size() != face.size() || face.size() < static_cast<std::size_t>(p.dim())) {
      fail(r.a, "(a) support face at " + dir_str(u) + " is not a facet");
      continue;
    }
    net_facet[k] = *f;
    const double asym = asymmetry(face);
    r.symmetry_error = std::max(r.symmetry_error, asym);
    if (asym > tol) fail(r.a, "(a) facet at " + dir_str(u) + " is not centrally symmetric");

    const auto tangents = facial_tangents(p, p.facet_ref(*f));
    std::vector<TangentVector> ts;
    for (const auto& ft : tangents) {
      ts.push_back(ft.tangent);
      r.adjacency_angle = std::max(r.adjacency_angle, ft.angle);
      if (!(ft.angle < eta)) fail(r.c, "(c) neighbor of the facet at " + dir_str(u) + " is too steep");
    }
    double gap = 0.0;
    if (!verify_tangent_covering(u, ts, eta, &gap)) {
      fail(r.b, "(b) facial tangents at " + dir_str(u) + " do not cover T_u");
    }
    r.tangent_gap = std::max(r.tangent_gap, gap);
  }

  std::set<int> seen;
  std::set<int> nets(net_facet.begin(), net_facet.end());
  for (std::size_t k = 0; k < net_facet.size(); ++k) {
    if (net_facet[k] < 0) continue;
    for (int nb : p.neighbors(net_facet[k])) {
      if (!seen.insert(nb).second || nets.count(nb)) {
        fail(r.d, "(d) a facet is adjacent to two net facets (near " + dir_str(net.members[k]) + ")");
      }
    }
  }
  return r;
}

PairReport check_pair_structure(const Polytope& p1, const Polytope& p2, const EtaNet& net) {
  PairReport r;
  r.same_normals = r.translates = r.mirrored_adjacency = true;
  auto fail = [&](bool& flag, const std::string& why) {
    flag = false;
    if (r.failure.empty()) r.failure = why;
  };
  if (p1.facet_count() != p2.facet_count()) fail(r.same_normals, "facet counts differ");
  for (const auto& [a, b] : {std::make_pair(&p1, &p2), std::make_pair(&p2, &p1)}) {
    for (const auto& f : a->facets()) {
      if (!b->find_facet(f.normal)) {
        fail(r.same_normals, "facet normal " + dir_str(f.normal) + " has no partner");
        break;
      }
    }
  }
  const double tol = kPlaneTolerance * std::max(scale_of(p1), scale_of(p2));
  for (const auto& u : net.members) {
    const auto f1 = p1.find_facet(u);
    const auto f2 = p2.find_facet(u);
    if (!f1 || !f2) {
      fail(r.translates, "missing net facet at " + dir_str(u));
      continue;
    }
    const auto& v1 = p1.facet(*f1).vertices;
    const auto& v2 = p2.facet(*f2).vertices;
    if (v1.size() != v2.size()) {
      fail(r.translates, "net facets at " + dir_str(u) + " differ in vertex count");
      continue;
    }
    const Vec y = p2.facet_centroid(*f2) - p1.facet_centroid(*f1);
    for (int a : v1) {
      const Vec moved = p1.vertices()[static_cast<std::size_t>(a)] + y;
      double best = 1e300;
      for (int b : v2) best = std::min(best, (p2.vertices()[static_cast<std::size_t>(b)] - moved).norm());
      r.translate_error = std::max(r.translate_error, best);
    }
    if (r.translate_error > tol) fail(r.translates, "net facets at " + dir_str(u) + " are not translates");

    std::size_t matched = 0;
    for (int nb : p1.neighbors(*f1)) {
      const auto g = p2.find_facet(p1.facet(nb).normal);
      if (g && p2.adjacent(*f2, *g)) ++matched;
    }
    if (matched != p1.neighbors(*f1).size() || matched != p2.neighbors(*f2).size()) {
      fail(r.mirrored_adjacency, "adjacency at " + dir_str(u) + " is not mirrored");
    }
  }
  return r;
}

}  // namespace vh
