#include "vh/constructions.hpp"
#include "vh/errors.hpp"
#include "vh/json_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace vh;
using io::Json;

namespace {

Polytope cube() {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(make_vec({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0}));
  return convex_hull(pts);
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(JsonIo, VectorsAndDirections) {
  EXPECT_EQ(io::to_json(make_vec({1, 2.5})).dump(), "[1.0,2.5]");
  EXPECT_EQ(io::vec_from_json(Json::parse("[1, 2, 3]")), make_vec({1, 2, 3}));
  EXPECT_THROW(io::vec_from_json(Json::parse("[1, 2]"), 3), ValidationError);
  EXPECT_THROW(io::vec_from_json(Json::parse("[1, \"x\"]")), ValidationError);
  EXPECT_THROW(io::vec_from_json(Json::parse("{}")), ValidationError);
  EXPECT_THROW(io::direction_from_json(Json::parse("[0, 0]")), ValidationError);
  EXPECT_NEAR(io::direction_from_json(Json::parse("[3, 4]"))[1], 0.8, 1e-15);
}

TEST(JsonIo, NetRoundTrip) {
  const EtaNet net = build_eta_net(3, 0.8);
  const EtaNet back = io::net_from_json(Json::parse(io::to_json(net).dump()));
  EXPECT_EQ(back.dim, 3);
  EXPECT_EQ(back.eta, net.eta);
  ASSERT_EQ(back.members.size(), net.members.size());
  for (std::size_t i = 0; i < net.members.size(); ++i) EXPECT_EQ(back.members[i].vec(), net.members[i].vec());
  EXPECT_THROW(io::net_from_json(Json::parse(R"({"eta": 1, "members": [], "extra": 0})")), ValidationError);
  EXPECT_THROW(io::net_from_json(Json::parse(R"({"eta": 1, "members": []})")), ValidationError);
  EXPECT_THROW(io::net_from_json(Json::parse(R"({"eta": 1, "members": [[1, 0], [0, 0, 1]]})")), ValidationError);
}

TEST(JsonIo, PolytopeRoundTripAndSchema) {
  const Polytope c = cube();
  const Json j = io::to_json(c);
  ASSERT_TRUE(j.contains("vertices"));
  ASSERT_TRUE(j.contains("facets"));
  ASSERT_TRUE(j.contains("adjacency"));
  EXPECT_EQ(j["adjacency"].size(), 12u);
  const Polytope back = io::polytope_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.vertices(), c.vertices());
  ASSERT_EQ(back.facet_count(), c.facet_count());
  for (std::size_t f = 0; f < c.facet_count(); ++f) {
    EXPECT_EQ(back.facets()[f].normal.vec(), c.facets()[f].normal.vec());
    EXPECT_EQ(back.facets()[f].offset, c.facets()[f].offset);
    EXPECT_EQ(back.facets()[f].vertices, c.facets()[f].vertices);
  }
  EXPECT_EQ(back.adjacency(), c.adjacency());
}

TEST(JsonIo, PolytopeFromVerticesOnlyAndMismatch) {
  const Json bare = Json::parse(R"({"vertices": [[-1,-1],[1,-1],[1,1],[-1,1],[0,0]]})");
  const Polytope sq = io::polytope_from_json(bare);
  EXPECT_EQ(sq.facet_count(), 4u);
  EXPECT_EQ(sq.vertices().size(), 4u);
  const Json normals = Json::parse(
      R"({"vertices": [[-1,-1],[1,-1],[1,1],[-1,1]], "facets": [{"normal":[1,0],"offset":1},{"normal":[0,1],"offset":1},{"normal":[-1,0],"offset":1},{"normal":[0,-1],"offset":1}]})");
  EXPECT_EQ(io::polytope_from_json(normals).facet_count(), 4u);
  Json wrong = normals;
  wrong["facets"][0]["offset"] = 2.0;
  EXPECT_THROW(io::polytope_from_json(wrong), ValidationError);
  Json bad_adj = io::to_json(cube());
  bad_adj["adjacency"].push_back({0, 0});
  EXPECT_THROW(io::polytope_from_json(bad_adj), ValidationError);
  EXPECT_THROW(io::polytope_from_json(Json::parse(R"({"vertices": [[0,0],[1,1],[2,2]]})")), ValidationError);
  EXPECT_THROW(io::polytope_from_json(Json::parse(R"({"vertices": [[0,0],[1,0],[0,1]], "colour": 1})")),
               ValidationError);
}

TEST(JsonIo, BodySpecs) {
  const Body ball = io::body_from_json(Json::parse(R"({"ball": {"center": [0, 0], "radius": 1}})"));
  EXPECT_DOUBLE_EQ(support_value(ball, Direction::axis(2, 0)), 1.0);
  const Body sum = io::body_from_json(Json::parse(
      R"({"sum": [{"ball": {"center": [0, 0, 0], "radius": 1}}, {"ellipsoid": {"center": [0, 0, 0], "semi_axes": [1.1, 1.0, 0.9]}}]})"));
  EXPECT_NEAR(support_value(sum, Direction::axis(3, 0)), 2.1, 1e-15);
  const Body par = io::body_from_json(
      Json::parse(R"({"parallel": {"inner": {"polytope": {"vertices": [[-1,-1],[1,-1],[1,1],[-1,1]]}}, "radius": 0.5}})"));
  EXPECT_DOUBLE_EQ(support_value(par, Direction::axis(2, 1)), 1.5);
  for (const auto& b : {ball, sum, par}) {
    const Json j = io::to_json(b);
    EXPECT_EQ(io::to_json(io::body_from_json(Json::parse(j.dump()))).dump(), j.dump());
  }
  EXPECT_THROW(io::body_from_json(Json::parse(R"({"ball": {"center": [0, 0], "radius": -1}})")), ValidationError);
  EXPECT_THROW(io::body_from_json(Json::parse(R"({"ball": {"center": [0, 0]}})")), ValidationError);
  EXPECT_THROW(io::body_from_json(Json::parse(R"({"ball": {"center": [0, 0], "radius": 1, "r": 2}})")),
               ValidationError);
  EXPECT_THROW(io::body_from_json(Json::parse(R"({"cube": {}})")), ValidationError);
  EXPECT_THROW(io::body_from_json(Json::parse(R"({"polytope": {"vertices": [[0,0],[1,0],[0,1]]}})")),
               ValidationError);
  EXPECT_NO_THROW(io::convex_set_from_json(Json::parse(R"({"polytope": {"vertices": [[0,0],[1,0],[0,1]]}})")));
}

TEST(JsonIo, RoundedBodyRoundTrip) {
  const Polytope c = cube();
  std::vector<Vec> z;
  for (std::size_t f = 0; f < c.facet_count(); ++f) z.push_back(c.facet_centroid(static_cast<int>(f)));
  const RoundedBody rb = round_polytope(c, z, 0.2);
  const RoundedBody back = io::rounded_from_json(Json::parse(io::to_json(rb).dump()));
  EXPECT_EQ(back.epsilon(), rb.epsilon());
  EXPECT_EQ(back.rho(), rb.rho());
  EXPECT_EQ(back.touch_points(), rb.touch_points());
  Json broken = io::to_json(rb);
  broken["epsilon"] = 5.0;
  EXPECT_THROW(io::rounded_from_json(broken), std::exception);
}

TEST(JsonIo, CertifiedPairRoundTrip) {
  const Body seed = Body::ball(make_vec({0, 0}), 1.0);
  const CertifiedPair c = certify_pair(seed, seed, 2, 2, 2, 0.2);
  const Json j = io::to_json(c);
  const CertifiedPair back = io::certified_pair_from_json(Json::parse(j.dump()));
  EXPECT_EQ(io::to_json(back).dump(), j.dump());
  EXPECT_EQ(back.witnesses.size(), c.witnesses.size());
  EXPECT_TRUE(back.verified);
  Json extra = j;
  extra["note"] = "x";
  EXPECT_THROW(io::certified_pair_from_json(extra), ValidationError);
}

TEST(JsonIo, Files) {
  const auto path = temp_file("vh_json_test.json");
  io::write_json_file(path, io::to_json(cube()));
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "{");
  EXPECT_EQ(io::polytope_from_json(io::read_json_file(path)).facet_count(), 6u);
  {
    std::ofstream garbage(path);
    garbage << "{ not json";
  }
  EXPECT_THROW(io::read_json_file(path), IoError);
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_json_file(temp_file("vh_missing_file.json")), IoError);
  EXPECT_THROW(io::write_json_file("/nonexistent-dir/out.json", Json::object()), IoError);
}
