#include "oracles.hpp"

#include "vh/body.hpp"
#include "vh/distance.hpp"
#include "vh/errors.hpp"
#include "vh/reverse_gauss.hpp"
#include "vh/rounded.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vh;

namespace {

Polytope square() {
  const std::vector<Vec> pts{make_vec({-1, -1}), make_vec({1, -1}), make_vec({1, 1}), make_vec({-1, 1})};
  return convex_hull(pts);
}

Polytope cube() {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(make_vec({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0}));
  return convex_hull(pts);
}

std::vector<Vec> centroids(const Polytope& p) {
  std::vector<Vec> z;
  for (std::size_t f = 0; f < p.facet_count(); ++f) z.push_back(p.facet_centroid(static_cast<int>(f)));
  return z;
}

void expect_sublinear(const Body& b, unsigned seed) {
  const auto us = oracle::uniform_probes(b.dim(), 101, seed);
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    const Vec s = us[i].vec() + us[i + 1].vec();
    if (s.norm() < 1e-6) continue;
    EXPECT_GE(support_value(b, us[i]) + support_value(b, us[i + 1]) + 1e-9, s.norm() * support_value(b, Direction(s)));
  }
}

}  // namespace

TEST(BodySupport, Examples) {
  const Body ball = Body::ball(make_vec({0, 0}), 1.0);
  for (const auto& u : oracle::uniform_probes(2, 20, 1)) EXPECT_DOUBLE_EQ(support_value(ball, u), 1.0);
  EXPECT_DOUBLE_EQ(support_value(Body::ellipsoid(make_vec({0, 0}), make_vec({2, 1})), Direction::axis(2, 0)), 2.0);
  const Body sum = Body::sum({Body::ball(make_vec({0, 0}), 1.0), Body::ball(make_vec({0, 0}), 2.0)});
  for (const auto& u : oracle::uniform_probes(2, 20, 2)) EXPECT_NEAR(support_value(sum, u), 3.0, 1e-15);
}

TEST(BodySupport, ClosedFormsAgainstBoundarySampling) {
  const Body e = Body::ellipsoid(make_vec({0.5, -1, 2}), make_vec({1.1, 1.0, 0.9}));
  for (const auto& u : oracle::uniform_probes(3, 20, 3)) {
    double best = -1e300;
    for (int i = 0; i < 400; ++i) {
      for (int j = 0; j <= 200; ++j) {
        const double th = 2 * kPi * i / 400, ph = kPi * j / 200;
        const Vec x = make_vec({0.5 + 1.1 * std::sin(ph) * std::cos(th), -1 + 1.0 * std::sin(ph) * std::sin(th),
                                2 + 0.9 * std::cos(ph)});
        best = std::max(best, x.dot(u.vec()));
      }
    }
    EXPECT_NEAR(support_value(e, u), best, 1e-3);
    EXPECT_GE(support_value(e, u), best - 1e-12);
  }
}

TEST(BodySupport, SumAdditivityIsExact) {
  const Body a = Body::ellipsoid(make_vec({1, 0, 0}), make_vec({1, 2, 3}));
  const Body b = Body::ball(make_vec({0, -1, 0.5}), 0.7);
  const Body s = Body::sum({a, b});
  for (const auto& u : oracle::uniform_probes(3, 200, 4)) {
    EXPECT_EQ(support_value(s, u), support_value(a, u) + support_value(b, u));
  }
}

TEST(BodySupport, ParallelBodies) {
  const Body p = Body::parallel(cube(), 0.25);
  const Body q = Body::parallel(Body::ball(make_vec({0, 0, 0}), 1.0), 0.5);
  for (const auto& u : oracle::uniform_probes(3, 50, 5)) {
    EXPECT_NEAR(support_value(p, u), support_value(cube(), u) + 0.25, 1e-15);
    EXPECT_NEAR(support_value(q, u), 1.5, 1e-15);
  }
  EXPECT_FALSE(is_strictly_convex(p));
  EXPECT_TRUE(is_strictly_convex(q));
}

TEST(BodySupport, Sublinearity) {
  expect_sublinear(Body::ball(make_vec({1, 2}), 0.3), 6);
  expect_sublinear(Body::ellipsoid(make_vec({0, 0, 0}), make_vec({3, 1, 0.2})), 7);
  expect_sublinear(Body::sum({Body::ball(make_vec({0, 0, 0}), 1.0), Body::parallel(cube(), 0.1)}), 8);
}

TEST(BodyValidation, RejectsNonPositiveParameters) {
  EXPECT_THROW(Body::ball(make_vec({0, 0}), 0.0), ValidationError);
  EXPECT_THROW(Body::ball(make_vec({0, 0}), -1.0), ValidationError);
  EXPECT_THROW(Body::ellipsoid(make_vec({0, 0}), make_vec({1, 0})), ValidationError);
  EXPECT_THROW(Body::parallel(cube(), 0.0), ValidationError);
  EXPECT_THROW(Body::sum({}), ValidationError);
  EXPECT_THROW(Body::sum({Body::ball(make_vec({0, 0}), 1.0), Body::ball(make_vec({0, 0, 0}), 1.0)}), ValidationError);
}

TEST(ProfileValue, Examples) {
  const Polytope sq = square();
  const RoundedBody rb = round_polytope(sq, centroids(sq), 0.1);
  const double eps = rb.epsilon();
  for (std::size_t i = 0; i < sq.facet_count(); ++i) {
    const int f = static_cast<int>(i);
    const Vec z = rb.touch_points()[i];
    const Vec u = sq.facet(f).normal.vec();
    EXPECT_NEAR(rb.profile_value(f, z), -eps, 1e-15);
    EXPECT_NEAR(profile_value(rb, f, Vec(z + eps * u)), 0.0, 1e-15);
    const Vec rim = z + rb.rho()[i] * Vec(make_vec({-u[1], u[0]}));
    EXPECT_NEAR(rb.profile_value(f, rim), 0.0, 1e-14);
    EXPECT_NEAR(rb.curvature(f), 2 * eps / (rb.rho()[i] * rb.rho()[i]), 1e-15);
  }
}

TEST(ProfileValue, ConvexAlongRandomSegments) {
  const Polytope c = cube();
  const RoundedBody rb = round_polytope(c, centroids(c), 0.2);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int s = 0; s < 100; ++s) {
    const Vec a = make_vec({u(rng), u(rng), u(rng)});
    const Vec b = make_vec({u(rng), u(rng), u(rng)});
    for (int f = 0; f < static_cast<int>(c.facet_count()); ++f) {
      const double mid = rb.profile_value(f, Vec(0.5 * (a + b)));
      EXPECT_LE(mid, 0.5 * (rb.profile_value(f, a) + rb.profile_value(f, b)) + 1e-10);
      // The gradient agrees with finite differences.
      const Vec g = rb.profile_gradient(f, a);
      for (int k = 0; k < 3; ++k) {
        Vec up = a, dn = a;
        up[k] += 1e-6;
        dn[k] -= 1e-6;
        EXPECT_NEAR(g[k], (rb.profile_value(f, up) - rb.profile_value(f, dn)) / 2e-6, 1e-6);
      }
    }
  }
}

TEST(RoundPolytope, SquareApex) {
  const Polytope sq = square();
  const RoundedBody rb = round_polytope(sq, centroids(sq), 0.1);
  const double eps = rb.epsilon();
  EXPECT_GT(eps, 0.0);
  EXPECT_LE(eps, 0.1 / std::sqrt(2.0));
  const Body k = Body::rounded(rb);
  const auto x = reverse_gauss_point(k, Direction::axis(2, 0));
  EXPECT_NEAR(x.point[0], 1.0 + eps, 1e-7);
  EXPECT_NEAR(x.point[1], 0.0, 1e-7);
  EXPECT_DOUBLE_EQ(rb.apex(*sq.find_facet(Direction::axis(2, 0)))[0], 1.0 + eps);
}

TEST(RoundPolytope, Invariants) {
  for (const Polytope& p : {square(), cube()}) {
    const RoundedBody rb = round_polytope(p, centroids(p), 0.2);
    const auto res = rb.residuals();
    EXPECT_LE(res.vertex, 1e-9);
    EXPECT_LE(res.apex, 1e-9);
    // Independent recheck of both memberships.
    for (const auto& v : p.vertices()) {
      for (int j = 0; j < static_cast<int>(p.facet_count()); ++j) EXPECT_LE(rb.profile_value(j, v), 1e-9);
    }
    for (int i = 0; i < static_cast<int>(p.facet_count()); ++i) {
      for (int j = 0; j < static_cast<int>(p.facet_count()); ++j) {
        if (i != j) EXPECT_LE(rb.profile_value(j, rb.apex(i)), 1e-9);
      }
      EXPECT_GT(relint_margin(p, i, rb.touch_points()[static_cast<std::size_t>(i)]), 0.0);
    }
    EXPECT_TRUE(is_strictly_convex(Body::rounded(rb)));
  }
}

TEST(RoundPolytope, HausdorffWithinEps0) {
  const Polytope c = cube();
  const double eps0 = 0.2;
  const RoundedBody rb = round_polytope(c, centroids(c), eps0);
  const ConvexSet k = Body::rounded(rb);
  const ConvexSet p = c;
  const auto sample = distance_sample(c, build_eta_net(3, 0.3));
  const double d = hausdorff_support(k, p, sample);
  EXPECT_LE(d, eps0);
  EXPECT_GE(d, rb.epsilon() - 1e-9);
}

TEST(RoundPolytope, PlanarSupportMatchesRadialOracle) {
  const Polytope sq = square();
  const RoundedBody rb = round_polytope(sq, centroids(sq), 0.3);
  const Body k = Body::rounded(rb);
  for (const auto& u : oracle::uniform_probes(2, 8, 10)) {
    const double ref = oracle::rounded_support_2d(rb, u.vec(), make_vec({0, 0}), 20000);
    EXPECT_NEAR(support_value(k, u), ref, 1e-6);
    EXPECT_GE(support_value(k, u) + 1e-9, ref);
  }
}

TEST(RoundPolytope, Errors) {
  const Polytope sq = square();
  auto z = centroids(sq);
  z[0] = sq.vertices()[static_cast<std::size_t>(sq.facet(0).vertices[0])];
  EXPECT_THROW(round_polytope(sq, z, 0.1), ValidationError);
  EXPECT_THROW(round_polytope(sq, centroids(sq), 0.0), ValidationError);
  EXPECT_THROW(round_polytope(sq, std::vector<Vec>{make_vec({1, 0})}, 0.1), ValidationError);
}
