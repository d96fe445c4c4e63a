#pragma once

#include "vh/body.hpp"
#include "vh/polytope.hpp"
#include "vh/sphere.hpp"

#include <span>
#include <variant>

namespace vh {

/// Either representation of a convex body.
using ConvexSet = std::variant<Polytope, Body>;

int dim_of(const ConvexSet& s);
double support_value(const ConvexSet& s, const Direction& u);

/// max over the sample of |h_A(u) - h_B(u)|: a lower bound on the
/// Hausdorff distance that converges as the sample refines.
double hausdorff_support(const ConvexSet& a, const ConvexSet& b, std::span<const Direction> sample);
double hausdorff_support(const ConvexSet& a, const ConvexSet& b, const EtaNet& sample);

/// Sample directions for distance checks against a polytope: a base net
/// plus all facet normals (where support differences of outer
/// approximations peak) plus directions from the centroid to each vertex.
std::vector<Direction> distance_sample(const Polytope& p, const EtaNet& base);

}  // namespace vh
