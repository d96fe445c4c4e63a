#pragma once

#include "vh/body.hpp"
#include "vh/constructions.hpp"
#include "vh/distance.hpp"
#include "vh/polytope.hpp"
#include "vh/rounded.hpp"
#include "vh/sphere.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace vh::io {

using Json = nlohmann::ordered_json;

// Writers. Keys appear in a fixed order so output is byte-stable.
Json to_json(const Vec& v);
Json to_json(const Direction& u);
Json to_json(const EtaNet& net);
Json to_json(const Polytope& p);
Json to_json(const RoundedBody& rb);
Json to_json(const Body& b);
Json to_json(const ConvexSet& k);
Json to_json(const PropertyReport& r);
Json to_json(const PairReport& r);
Json to_json(const ApproxResult& r);
Json to_json(const TurnWitnessRecord& w);
Json to_json(const CertifiedPair& c);

// Readers. Unknown keys, missing keys and malformed values raise
// ValidationError.
Vec vec_from_json(const Json& j, int dim = -1);
Direction direction_from_json(const Json& j, int dim = -1);
EtaNet net_from_json(const Json& j);
/// Facet vertex lists are optional; without them the facets are rebuilt
/// from the hull of the vertices and must match the listed normals.
Polytope polytope_from_json(const Json& j);
RoundedBody rounded_from_json(const Json& j);
/// Body specs: {"ball": ...}, {"ellipsoid": ...}, {"sum": [...]},
/// {"parallel": {"inner": ..., "radius": r}}, {"rounded": ...}.
Body body_from_json(const Json& j);
/// A body spec or {"polytope": ...}.
ConvexSet convex_set_from_json(const Json& j);
TurnWitnessRecord witness_from_json(const Json& j);
CertifiedPair certified_pair_from_json(const Json& j);

/// Throws IoError when the file cannot be opened or does not parse.
Json read_json_file(const std::filesystem::path& path);
/// Two-space indentation and a trailing newline. Throws IoError.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace vh::io
