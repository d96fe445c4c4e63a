#include "oracles.hpp"

#include "vh/constructions.hpp"
#include "vh/hedgehog.hpp"
#include "vh/tameness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace vh;

namespace {

const CertifiedPair& planar_certificate() {
  static const CertifiedPair c = [] {
    const Body seed = Body::ball(make_vec({0, 0}), 1.0);
    return certify_pair(seed, seed, 2, 2, 2, 0.2);
  }();
  return c;
}

DirectionMap certified_map() {
  const auto& c = planar_certificate();
  return map_of(VirtualBody(Body::rounded(c.body1), Body::rounded(c.body2)));
}

/// Angles where R = h_E + h_E'' - 1 changes sign for the axis-aligned
/// ellipse with semi-axes a, b, by dense evaluation and bisection.
std::vector<double> ellipse_disc_cusps(double a, double b) {
  const auto r = [&](double t) {
    const double q = a * a * std::cos(t) * std::cos(t) + b * b * std::sin(t) * std::sin(t);
    return a * a * b * b / std::pow(q, 1.5) - 1.0;
  };
  std::vector<double> out;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double lo = 2 * kPi * i / n;
    double hi = 2 * kPi * (i + 1) / n;
    if ((r(lo) > 0) == (r(hi) > 0)) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((r(mid) > 0) == (r(lo) > 0) ? lo : hi) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

}  // namespace

TEST(CheckPair, BallIsTame) {
  const auto x = map_of(Body::ball(make_vec({0, 0, 0}), 1.0));
  for (const auto& u : oracle::uniform_probes(3, 30, 31)) {
    for (const auto& t : tangent_basis(u)) {
      for (double l : {1e-4, 0.01, 0.5, 3.0}) {
        const auto r = check_pair(x, u, t, l, 0.5 * l);
        EXPECT_GE(r.s_plus, 0.0);
        EXPECT_LE(r.s_minus, 0.0);
        EXPECT_LE(r.product, 0.0);
        EXPECT_DOUBLE_EQ(r.product, r.s_plus * r.s_minus);
      }
    }
  }
}

TEST(CheckPair, ConstantMap) {
  const DirectionMap x = [](const Direction&) { return make_vec({1, 2}); };
  const Direction u = Direction::axis(2, 0);
  const auto r = check_pair(x, u, tangent_basis(u)[0], 0.1, 0.2);
  EXPECT_EQ(r.s_plus, 0.0);
  EXPECT_EQ(r.s_minus, 0.0);
  EXPECT_EQ(r.product, 0.0);
}

TEST(CheckPair, CertifiedWitnessIncrements) {
  const auto& c = planar_certificate();
  ASSERT_TRUE(c.verified);
  const auto x = certified_map();
  ASSERT_FALSE(c.witnesses.empty());
  for (const auto& w : c.witnesses) {
    const auto r = check_pair(x, w.u, w.t, w.lambda, w.mu);
    EXPECT_NEAR(r.s_plus, -w.gamma_plus, 1e-6);
    EXPECT_NEAR(r.s_minus, -w.gamma_minus, 1e-6);
    EXPECT_GT(r.product, 0.0);
    EXPECT_NEAR(r.product, w.gamma_plus * w.gamma_minus, 1e-6);
    EXPECT_LT(w.lambda, 1.0 / c.k);
    EXPECT_LT(w.mu, 1.0 / c.k);
  }
}

TEST(DetectTurn, ConcentricBallsAreSampledTame) {
  const auto x = map_of(VirtualBody(Body::ball(make_vec({0, 0}), 2.0), Body::ball(make_vec({0, 0}), 1.0)));
  for (const auto& u : build_eta_net(2, 0.3).members) {
    for (const auto& t : tangent_eta_net(u, 0.3)) {
      const auto v = detect_turn(x, u, t, 0.5, 12);
      EXPECT_FALSE(v.is_turn());
      EXPECT_EQ(v.kind, TamenessVerdict::Kind::kSampledTame);
      EXPECT_EQ(v.product, 0.0);
    }
  }
}

TEST(DetectTurn, CertifiedPairTurnsWithinOneOverK) {
  const auto& c = planar_certificate();
  const auto x = certified_map();
  const double eps = 1.0 / c.k;
  for (const auto& w : c.witnesses) {
    const auto v = detect_turn(x, w.u, w.t, eps, 20);
    ASSERT_TRUE(v.is_turn());
    EXPECT_GT(v.lambda, 0.0);
    EXPECT_LT(v.lambda, eps);
    EXPECT_GT(v.mu, 0.0);
    EXPECT_LT(v.mu, eps);
    EXPECT_GT(v.product, kTurnThreshold);
    // The witness found by the grid is reproduced by a direct check.
    EXPECT_DOUBLE_EQ(check_pair(x, w.u, w.t, v.lambda, v.mu).product, v.product);
  }
}

TEST(DetectTurn, AntisymmetryInTangent) {
  const auto& c = planar_certificate();
  const auto x = certified_map();
  const auto e = map_of(VirtualBody(Body::ellipsoid(make_vec({0, 0}), make_vec({1.2, 0.8})),
                                    Body::ball(make_vec({0, 0}), 1.0)));
  for (const auto& m : {x, e}) {
    for (const auto& u : c.net.members) {
      const TangentVector t = tangent_basis(u)[0];
      EXPECT_EQ(detect_turn(m, u, t, 0.5, 14).is_turn(), detect_turn(m, u, -t, 0.5, 14).is_turn());
    }
  }
}

TEST(DetectTurn, WitnessReuseForLargerEpsilon) {
  const auto x = certified_map();
  for (const auto& w : planar_certificate().witnesses) {
    const auto v = detect_turn(x, w.u, w.t, 0.5, 12);
    ASSERT_TRUE(v.is_turn());
    EXPECT_TRUE(detect_turn(x, w.u, w.t, 1.0, 13).is_turn());
    EXPECT_GT(check_pair(x, w.u, w.t, v.lambda, v.mu).product, kTurnThreshold);
  }
}

TEST(Survey, SingleBodiesHaveNoTurns) {
  const std::vector<Body> bodies{Body::ball(make_vec({0, 0}), 1.0),
                                 Body::ellipsoid(make_vec({1, 0}), make_vec({2, 0.5})),
                                 Body::ellipsoid(make_vec({0, 0, 0}), make_vec({1.1, 1.0, 0.9}))};
  for (const auto& b : bodies) {
    const auto r = survey(map_of(b), build_eta_net(b.dim(), 0.6), 0.8, 0.5, 10);
    EXPECT_EQ(r.turns, 0u);
    EXPECT_EQ(r.sampled_tame, r.rows.size());
    EXPECT_GT(r.rows.size(), 0u);
  }
}

TEST(Survey, EllipseMinusDiscTurnsAtCusps) {
  const double a = 1.2, b = 0.8;
  const auto cusps = ellipse_disc_cusps(a, b);
  ASSERT_EQ(cusps.size(), 4u);
  EtaNet net{2, 0.5, {}};
  for (double th : cusps) net.members.push_back(Direction::from_angle(th));
  net.members.push_back(Direction::from_angle(0.0));
  net.members.push_back(Direction::from_angle(kPi / 2));
  const auto x = map_of(VirtualBody(Body::ellipsoid(make_vec({0, 0}), make_vec({a, b})),
                                    Body::ball(make_vec({0, 0}), 1.0)));
  const auto r = survey(x, net, 0.3, 0.1, 10);
  EXPECT_GT(r.turns, 0u);
  for (const auto& row : r.rows) {
    const bool at_cusp = std::any_of(cusps.begin(), cusps.end(), [&](double th) {
      return sphere_distance(row.u, Direction::from_angle(th)) < 1e-9;
    });
    EXPECT_EQ(row.is_turn(), at_cusp);
  }
}

TEST(Survey, CertifiedPairTurnsEverywhere) {
  const auto& c = planar_certificate();
  const auto r = survey(certified_map(), c.net, 0.3, 1.0 / c.k, 12);
  EXPECT_EQ(r.rows.size(), 2 * c.net.members.size());
  EXPECT_EQ(r.turns, r.rows.size());
  EXPECT_EQ(r.sampled_tame, 0u);
}

TEST(Survey, CsvHeaderAndRows) {
  const auto& c = planar_certificate();
  const auto r = survey(certified_map(), c.net, 0.3, 0.5, 8);
  std::ostringstream out;
  write_survey_csv(r, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "u,t,verdict,lambda,mu,s_plus,s_minus");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find("TURN"), std::string::npos);
  }
  EXPECT_EQ(rows, r.rows.size());
}
