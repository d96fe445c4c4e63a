#include "oracles.hpp"

#include "vh/errors.hpp"
#include "vh/sphere.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vh;

namespace {

Direction e(int dim, int k) { return Direction::axis(dim, k); }

}  // namespace

TEST(SphereDistance, Examples) {
  EXPECT_DOUBLE_EQ(sphere_distance(e(3, 0), e(3, 0)), 0.0);
  EXPECT_NEAR(sphere_distance(e(3, 0), e(3, 1)), kPi / 2, 1e-15);
  EXPECT_NEAR(sphere_distance(e(3, 0), -e(3, 0)), kPi, 1e-15);
}

TEST(SphereDistance, SymmetricAndClamped) {
  const auto probes = oracle::uniform_probes(3, 200, 7);
  for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
    const double d = sphere_distance(probes[i], probes[i + 1]);
    EXPECT_DOUBLE_EQ(d, sphere_distance(probes[i + 1], probes[i]));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, kPi);
  }
  // Slightly non-unit inputs must not produce NaN near the antipode.
  EXPECT_FALSE(std::isnan(sphere_distance(make_vec({1.0 + 1e-15, 0, 0}), make_vec({-1.0, 0, 0}))));
}

TEST(Direction, NormalizesAndRejectsZero) {
  const Direction u(make_vec({3, 4}));
  EXPECT_NEAR(u.vec().norm(), 1.0, 1e-12);
  EXPECT_NEAR(u[0], 0.6, 1e-15);
  EXPECT_THROW(Direction(make_vec({0, 0, 0})), ValidationError);
}

TEST(Direction, UnitInputIsKeptExactly) {
  for (const auto& p : oracle::uniform_probes(3, 100, 11)) {
    const Direction again(p.vec());
    EXPECT_EQ(again.vec(), p.vec());
  }
}

TEST(Boxplus, Examples) {
  const Direction u = e(2, 0);
  const TangentVector t(u, e(2, 1).vec());
  EXPECT_TRUE(boxplus(u, t, 0.0).approx_equal(u));
  const Direction d = boxplus(u, t, 1.0);
  EXPECT_NEAR(d[0], std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(d[1], std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(sphere_distance(u, d), kPi / 4, 1e-15);
  EXPECT_NEAR(sphere_distance(u, d), std::atan(1.0), 1e-15);
}

TEST(Boxplus, TanIdentityOverRandomInputs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lam(0.1, 50.0);
  for (int dim : {2, 3}) {
    for (const auto& u : oracle::uniform_probes(dim, 500, 3 + dim)) {
      const auto t = tangent_basis(u)[0];
      const double l = lam(rng);
      const Direction v = boxplus(u, t, l);
      EXPECT_NEAR(std::tan(sphere_distance(u, v)), l, 1e-12 * std::max(1.0, l * l));
      EXPECT_NEAR(sphere_distance(u, v), std::atan(l), 1e-12);
      EXPECT_EQ(boxplus(u, t, -l).vec(), boxplus(u, -t, l).vec());
    }
  }
}

TEST(TangentVector, ProjectsAndNormalizes) {
  const Direction u = e(3, 2);
  const TangentVector t(u, make_vec({1, 1, 5}));
  EXPECT_NEAR(t.vec().norm(), 1.0, 1e-12);
  EXPECT_NEAR(t.vec().dot(u.vec()), 0.0, 1e-12);
  EXPECT_THROW(TangentVector(u, make_vec({0, 0, 2})), ValidationError);
}

TEST(TangentBasis, Examples) {
  const auto b3 = tangent_basis(e(3, 2));
  ASSERT_EQ(b3.size(), 2u);
  EXPECT_TRUE(Direction(b3[0].vec()).approx_equal(e(3, 0)));
  EXPECT_TRUE(Direction(b3[1].vec()).approx_equal(e(3, 1)));
  const auto b2 = tangent_basis(e(2, 0));
  ASSERT_EQ(b2.size(), 1u);
  EXPECT_TRUE(Direction(b2[0].vec()).approx_equal(e(2, 1)));
}

TEST(TangentBasis, OrthonormalAndDeterministic) {
  for (const auto& u : oracle::uniform_probes(3, 300, 5)) {
    const auto b = tangent_basis(u);
    const auto again = tangent_basis(u);
    ASSERT_EQ(b.size(), 2u);
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(b[i].vec().norm(), 1.0, 1e-12);
      EXPECT_NEAR(b[i].vec().dot(u.vec()), 0.0, 1e-12);
      EXPECT_EQ(b[i].vec(), again[i].vec());
    }
    EXPECT_NEAR(b[0].vec().dot(b[1].vec()), 0.0, 1e-12);
  }
}

TEST(EtaNet, PlanarExamples) {
  const EtaNet n8 = build_eta_net(2, kPi / 4);
  EXPECT_EQ(n8.members.size(), 8u);
  EXPECT_TRUE(verify_covering(n8, 10000, 1));
  const EtaNet n2 = build_eta_net(2, kPi);
  EXPECT_EQ(n2.members.size(), 2u);
  EXPECT_NEAR(n2.members[0].vec().dot(n2.members[1].vec()), -1.0, 1e-15);
}

TEST(EtaNet, SphereCoveringAgainstIndependentProbes) {
  const EtaNet net = build_eta_net(3, 0.5);
  ASSERT_GT(net.members.size(), 10u);
  const auto probes = oracle::uniform_probes(3, 10000, 99);
  const double gap = oracle::covering_gap(net.members, probes);
  EXPECT_LT(gap, 0.5);
  for (std::size_t i = 0; i < net.members.size(); ++i) {
    for (std::size_t j = i + 1; j < net.members.size(); ++j) {
      EXPECT_GT(sphere_distance(net.members[i], net.members[j]), 1e-9);
    }
  }
}

TEST(EtaNet, CoveringHoldsUnderReprobing) {
  for (double eta : {0.3, 0.7, 1.2}) {
    const EtaNet net = build_eta_net(3, eta);
    EXPECT_TRUE(verify_covering(net, 20000, 0xABCDEF));
    EXPECT_TRUE(verify_covering(net, 20000, 31337));
  }
}

TEST(EtaNet, RejectsBadInputs) {
  EXPECT_THROW(build_eta_net(3, 1e-6), ValidationError);
  EXPECT_THROW(build_eta_net(3, 0.0), ValidationError);
  EXPECT_THROW(build_eta_net(4, 0.5), ValidationError);
}

TEST(TangentEtaNet, Examples) {
  const Direction u(make_vec({0.6, 0.8}));
  const auto t2 = tangent_eta_net(u, 0.3);
  ASSERT_EQ(t2.size(), 2u);
  EXPECT_NEAR((t2[0].vec() + t2[1].vec()).norm(), 0.0, 1e-15);
  const auto t3 = tangent_eta_net(e(3, 2), kPi / 3);
  EXPECT_EQ(t3.size(), 6u);
  for (std::size_t i = 0; i < t3.size(); ++i) {
    EXPECT_NEAR(t3[i].vec().norm(), 1.0, 1e-12);
    EXPECT_NEAR(t3[i].vec().dot(e(3, 2).vec()), 0.0, 1e-12);
    EXPECT_NEAR(sphere_distance(t3[i].vec(), t3[(i + 1) % 6].vec()), kPi / 3, 1e-12);
  }
  EXPECT_TRUE(verify_tangent_covering(e(3, 2), t3, kPi / 3 + 1e-9));
}
