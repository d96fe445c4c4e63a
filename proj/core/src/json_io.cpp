#include "vh/json_io.hpp"

#include "vh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

namespace vh::io {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + ": expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ValidationError(what + ": unknown key \"" + item.key() + "\"");
  }
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(what + ": missing key \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError(what + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ValidationError(what + ": non-finite number");
  return x;
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ValidationError(what + ": expected an integer");
  return j.get<int>();
}

bool boolean(const Json& j, const std::string& what) {
  if (!j.is_boolean()) throw ValidationError(what + ": expected a boolean");
  return j.get<bool>();
}

double num_field(const Json& j, const char* key, const std::string& what) {
  return number(field(j, key, what), what + "." + key);
}

template <class T, class F>
std::vector<T> array_of(const Json& j, const std::string& what, F&& each) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(each(item));
  return out;
}

Json facet_json(const Facet& f) {
  Json j;
  j["normal"] = to_json(f.normal);
  j["offset"] = f.offset;
  j["vertices"] = f.vertices;
  return j;
}

}  // namespace

Json to_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Json to_json(const Direction& u) { return to_json(u.vec()); }

Json to_json(const EtaNet& net) {
  Json j;
  j["eta"] = net.eta;
  j["members"] = Json::array();
  for (const auto& u : net.members) j["members"].push_back(to_json(u));
  return j;
}

Json to_json(const Polytope& p) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : p.vertices()) j["vertices"].push_back(to_json(v));
  j["facets"] = Json::array();
  for (const auto& f : p.facets()) j["facets"].push_back(facet_json(f));
  j["adjacency"] = Json::array();
  for (const auto& [a, b] : p.adjacency()) j["adjacency"].push_back({a, b});
  return j;
}

Json to_json(const RoundedBody& rb) {
  Json j;
  j["base"] = to_json(rb.base());
  j["touch_points"] = Json::array();
  for (const auto& z : rb.touch_points()) j["touch_points"].push_back(to_json(z));
  j["rho"] = rb.rho();
  j["epsilon"] = rb.epsilon();
  return j;
}

Json to_json(const Body& b) {
  Json j;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) {
          j["ball"] = {{"center", to_json(node.center)}, {"radius", node.radius}};
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          j["ellipsoid"] = {{"center", to_json(node.center)}, {"semi_axes", to_json(node.semi_axes)}};
        } else if constexpr (std::is_same_v<T, MinkowskiSum>) {
          j["sum"] = Json::array();
          for (const auto& part : node.parts) j["sum"].push_back(to_json(part));
        } else if constexpr (std::is_same_v<T, ParallelBody>) {
          Json inner = std::visit(
              [](const auto& x) -> Json {
                if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Polytope>) {
                  return Json{{"polytope", to_json(x)}};
                } else {
                  return to_json(x);
                }
              },
              *node.inner);
          j["parallel"] = {{"inner", inner}, {"radius", node.radius}};
        } else {
          j["rounded"] = to_json(*node);
        }
      },
      b.node());
  return j;
}

Json to_json(const ConvexSet& k) {
  if (const auto* p = std::get_if<Polytope>(&k)) return Json{{"polytope", to_json(*p)}};
  return to_json(std::get<Body>(k));
}

Json to_json(const PropertyReport& r) {
  Json j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["c"] = r.c;
  j["d"] = r.d;
  j["symmetry_error"] = r.symmetry_error;
  j["tangent_gap"] = r.tangent_gap;
  j["adjacency_angle"] = r.adjacency_angle;
  j["failure"] = r.failure;
  return j;
}

Json to_json(const PairReport& r) {
  Json j;
  j["same_normals"] = r.same_normals;
  j["translates"] = r.translates;
  j["mirrored_adjacency"] = r.mirrored_adjacency;
  j["translate_error"] = r.translate_error;
  j["failure"] = r.failure;
  return j;
}

Json to_json(const ApproxResult& r) {
  Json j;
  j["polytope"] = to_json(r.polytope);
  j["net"] = to_json(r.net);
  j["eta"] = r.eta;
  j["eps"] = r.eps;
  j["report"] = to_json(r.report);
  j["distance"] = r.distance;
  j["net_facets"] = r.net_facets;
  j["lift"] = r.lift;
  j["dense_count"] = r.dense_count;
  j["mu"] = r.mu;
  return j;
}

Json to_json(const TurnWitnessRecord& w) {
  Json j;
  j["u"] = to_json(w.u);
  j["t"] = to_json(w.t.vec());
  j["v_plus"] = to_json(w.v_plus);
  j["v_minus"] = to_json(w.v_minus);
  j["lambda"] = w.lambda;
  j["mu"] = w.mu;
  j["beta_plus"] = w.beta_plus;
  j["gamma_plus"] = w.gamma_plus;
  j["beta_minus"] = w.beta_minus;
  j["gamma_minus"] = w.gamma_minus;
  j["y"] = to_json(w.y);
  j["s_plus"] = w.s_plus;
  j["s_minus"] = w.s_minus;
  j["product"] = w.product;
  j["product_reverse"] = w.product_reverse;
  j["residual_plus"] = w.residual_plus;
  j["residual_minus"] = w.residual_minus;
  return j;
}

Json to_json(const CertifiedPair& c) {
  Json j;
  j["seeds"] = {to_json(c.seed1), to_json(c.seed2)};
  j["k"] = c.k;
  j["m"] = c.m;
  j["j"] = c.j;
  j["eps0"] = c.eps0;
  j["eta"] = c.eta;
  j["net"] = to_json(c.net);
  j["epsilon"] = c.eps;
  j["bodies"] = {to_json(*c.body1), to_json(*c.body2)};
  j["witnesses"] = Json::array();
  for (const auto& w : c.witnesses) j["witnesses"].push_back(to_json(w));
  j["verification"] = {{"distance1", c.distance1},
                       {"distance2", c.distance2},
                       {"max_residual", c.max_residual},
                       {"verified", c.verified}};
  return j;
}

Vec vec_from_json(const Json& j, int dim) {
  if (!j.is_array()) throw ValidationError("vector: expected an array of numbers");
  if (dim >= 0 && j.size() != static_cast<std::size_t>(dim)) {
    throw ValidationError("vector: expected " + std::to_string(dim) + " coordinates");
  }
  if (j.empty() || j.size() > 3) throw ValidationError("vector: expected 1 to 3 coordinates");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], "vector coordinate");
  return v;
}

Direction direction_from_json(const Json& j, int dim) { return Direction(vec_from_json(j, dim)); }

EtaNet net_from_json(const Json& j) {
  check_keys(j, {"eta", "members"}, "net");
  EtaNet net;
  net.eta = num_field(j, "eta", "net");
  net.members = array_of<Direction>(field(j, "members", "net"), "net.members",
                                    [](const Json& m) { return direction_from_json(m); });
  if (net.members.empty()) throw ValidationError("net: no members");
  net.dim = net.members.front().dim();
  for (const auto& u : net.members) {
    if (u.dim() != net.dim) throw ValidationError("net: mixed dimensions");
  }
  return net;
}

Polytope polytope_from_json(const Json& j) {
  check_keys(j, {"vertices", "facets", "adjacency"}, "polytope");
  auto vertices = array_of<Vec>(field(j, "vertices", "polytope"), "polytope.vertices",
                                [](const Json& v) { return vec_from_json(v); });
  if (vertices.empty()) throw ValidationError("polytope: no vertices");
  const int dim = static_cast<int>(vertices.front().size());
  const Json* facets = j.contains("facets") ? &j["facets"] : nullptr;
  bool listed = facets != nullptr && facets->is_array() && !facets->empty();
  if (listed) {
    for (const auto& f : *facets) listed = listed && f.is_object() && f.contains("vertices");
  }
  Polytope p = [&] {
    if (listed) {
      auto fs = array_of<Facet>(*facets, "polytope.facets", [&](const Json& f) {
        check_keys(f, {"normal", "offset", "vertices"}, "facet");
        Facet out{direction_from_json(field(f, "normal", "facet"), dim), num_field(f, "offset", "facet"), {}};
        out.vertices = array_of<int>(field(f, "vertices", "facet"), "facet.vertices",
                                     [](const Json& i) { return integer(i, "facet vertex index"); });
        return out;
      });
      return Polytope(dim, std::move(vertices), std::move(fs));
    }
    Polytope hull = convex_hull(vertices);
    if (facets != nullptr) {
      if (!facets->is_array()) throw ValidationError("polytope.facets: expected an array");
      if (facets->size() != hull.facet_count()) throw ValidationError("polytope: facet list does not match the hull");
      for (const auto& f : *facets) {
        check_keys(f, {"normal", "offset", "vertices"}, "facet");
        const Direction n = direction_from_json(field(f, "normal", "facet"), dim);
        const auto idx = hull.find_facet(n);
        if (!idx || std::abs(hull.facet(*idx).offset - num_field(f, "offset", "facet")) >
                        kPlaneTolerance * (1.0 + std::abs(hull.facet(*idx).offset))) {
          throw ValidationError("polytope: listed facet is not a facet of the vertex hull");
        }
      }
    }
    return hull;
  }();
  if (j.contains("adjacency")) {
    const auto pairs = array_of<std::pair<int, int>>(j["adjacency"], "polytope.adjacency", [](const Json& e) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("adjacency entry must be a pair");
      return std::make_pair(integer(e[0], "adjacency index"), integer(e[1], "adjacency index"));
    });
    if (listed) {
      if (pairs.size() != p.adjacency().size()) throw ValidationError("polytope: adjacency does not match facets");
      for (const auto& [a, b] : pairs) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(std::max(a, b)) >= p.facet_count() || !p.adjacent(a, b)) {
          throw ValidationError("polytope: adjacency does not match facets");
        }
      }
    }
  }
  return p;
}

RoundedBody rounded_from_json(const Json& j) {
  check_keys(j, {"base", "touch_points", "rho", "epsilon"}, "rounded");
  Polytope base = polytope_from_json(field(j, "base", "rounded"));
  const int dim = base.dim();
  auto touch = array_of<Vec>(field(j, "touch_points", "rounded"), "rounded.touch_points",
                             [dim](const Json& v) { return vec_from_json(v, dim); });
  auto rho = array_of<double>(field(j, "rho", "rounded"), "rounded.rho",
                              [](const Json& x) { return number(x, "rounded.rho"); });
  if (touch.size() != base.facet_count() || rho.size() != base.facet_count()) {
    throw ValidationError("rounded: expected one touch point and one radius per facet");
  }
  return RoundedBody(std::move(base), std::move(touch), std::move(rho), num_field(j, "epsilon", "rounded"));
}

Body body_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1) throw ValidationError("body spec: expected an object with one key");
  const auto& [key, value] = *j.items().begin();
  if (key == "ball") {
    check_keys(value, {"center", "radius"}, "ball");
    return Body::ball(vec_from_json(field(value, "center", "ball")), num_field(value, "radius", "ball"));
  }
  if (key == "ellipsoid") {
    check_keys(value, {"center", "semi_axes"}, "ellipsoid");
    const Vec c = vec_from_json(field(value, "center", "ellipsoid"));
    return Body::ellipsoid(c, vec_from_json(field(value, "semi_axes", "ellipsoid"), static_cast<int>(c.size())));
  }
  if (key == "sum") {
    return Body::sum(array_of<Body>(value, "sum", [](const Json& part) { return body_from_json(part); }));
  }
  if (key == "parallel") {
    check_keys(value, {"inner", "radius"}, "parallel");
    const double r = num_field(value, "radius", "parallel");
    const ConvexSet inner = convex_set_from_json(field(value, "inner", "parallel"));
    return std::visit([r](const auto& x) { return Body::parallel(x, r); }, inner);
  }
  if (key == "rounded") return Body::rounded(rounded_from_json(value));
  if (key == "polytope") throw ValidationError("body spec: a polytope is not a strictly convex body");
  throw ValidationError("body spec: unknown kind \"" + key + "\"");
}

ConvexSet convex_set_from_json(const Json& j) {
  if (j.is_object() && j.size() == 1 && j.contains("polytope")) return polytope_from_json(j["polytope"]);
  return body_from_json(j);
}

TurnWitnessRecord witness_from_json(const Json& j) {
  const std::string w = "witness";
  check_keys(j,
             {"u", "t", "v_plus", "v_minus", "lambda", "mu", "beta_plus", "gamma_plus", "beta_minus", "gamma_minus",
              "y", "s_plus", "s_minus", "product", "product_reverse", "residual_plus", "residual_minus"},
             w);
  const Direction u = direction_from_json(field(j, "u", w));
  TurnWitnessRecord r{u,
                      TangentVector(u, vec_from_json(field(j, "t", w), u.dim())),
                      direction_from_json(field(j, "v_plus", w), u.dim()),
                      direction_from_json(field(j, "v_minus", w), u.dim()),
                      num_field(j, "lambda", w),
                      num_field(j, "mu", w),
                      num_field(j, "beta_plus", w),
                      num_field(j, "gamma_plus", w),
                      num_field(j, "beta_minus", w),
                      num_field(j, "gamma_minus", w),
                      vec_from_json(field(j, "y", w), u.dim())};
  r.s_plus = num_field(j, "s_plus", w);
  r.s_minus = num_field(j, "s_minus", w);
  r.product = num_field(j, "product", w);
  r.product_reverse = num_field(j, "product_reverse", w);
  r.residual_plus = num_field(j, "residual_plus", w);
  r.residual_minus = num_field(j, "residual_minus", w);
  return r;
}

CertifiedPair certified_pair_from_json(const Json& j) {
  const std::string w = "certified pair";
  check_keys(j, {"seeds", "k", "m", "j", "eps0", "eta", "net", "epsilon", "bodies", "witnesses", "verification"}, w);
  const Json& seeds = field(j, "seeds", w);
  const Json& bodies = field(j, "bodies", w);
  if (!seeds.is_array() || seeds.size() != 2 || !bodies.is_array() || bodies.size() != 2) {
    throw ValidationError(w + ": seeds and bodies must be pairs");
  }
  const Json& ver = field(j, "verification", w);
  check_keys(ver, {"distance1", "distance2", "max_residual", "verified"}, "verification");
  return CertifiedPair{body_from_json(seeds[0]),
                       body_from_json(seeds[1]),
                       integer(field(j, "k", w), "k"),
                       integer(field(j, "m", w), "m"),
                       integer(field(j, "j", w), "j"),
                       num_field(j, "eps0", w),
                       num_field(j, "eta", w),
                       net_from_json(field(j, "net", w)),
                       std::make_shared<const RoundedBody>(rounded_from_json(bodies[0])),
                       std::make_shared<const RoundedBody>(rounded_from_json(bodies[1])),
                       num_field(j, "epsilon", w),
                       array_of<TurnWitnessRecord>(field(j, "witnesses", w), "witnesses",
                                                   [](const Json& x) { return witness_from_json(x); }),
                       num_field(ver, "distance1", "verification"),
                       num_field(ver, "distance2", "verification"),
                       num_field(ver, "max_residual", "verification"),
                       boolean(field(ver, "verified", "verification"), "verification.verified")};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace vh::io
