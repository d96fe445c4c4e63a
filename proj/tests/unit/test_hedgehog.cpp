#include "vh/errors.hpp"
#include "vh/expr.hpp"
#include "vh/hedgehog.hpp"
#include "vh/reverse_gauss.hpp"
#include "vh/tameness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vh;

namespace {

/// Sign changes of h + h'' over one period, with h'' from a central
/// second difference on a 10x finer grid than any tested curve.
int dense_sign_changes(const std::function<double(double)>& h, int n = 40960) {
  const double step = 2 * kPi / n;
  auto r = [&](double t) { return h(t) + (h(t + step) - 2 * h(t) + h(t - step)) / (step * step); };
  int changes = 0;
  double prev = r(0.5 * step);
  for (int i = 1; i <= n; ++i) {
    const double cur = r((i + 0.5) * step);
    if ((cur > 0) != (prev > 0)) ++changes;
    prev = cur;
  }
  return changes;
}

PlanarSupport trefoil() { return PlanarSupport::expression("1 + 0.1cos(3t)"); }

std::size_t count_markers(const std::string& svg) {
  std::size_t n = 0;
  for (std::size_t pos = svg.find("<circle class=\"cusp\""); pos != std::string::npos;
       pos = svg.find("<circle class=\"cusp\"", pos + 1)) {
    ++n;
  }
  return n;
}

}  // namespace

TEST(SampleHedgehog, ConcentricBallsGiveUnitCircle) {
  const auto c = sample_hedgehog(PlanarSupport::constant(2.0), PlanarSupport::constant(1.0), 256);
  ASSERT_EQ(c.samples.size(), 256u);
  for (const auto& s : c.samples) {
    EXPECT_NEAR(s.point.norm(), 1.0, 1e-12);
    EXPECT_NEAR(s.point[0], std::cos(s.theta), 1e-12);
    EXPECT_NEAR(s.radius, 1.0, 1e-12);
  }
  EXPECT_TRUE(c.cusps.empty());
  EXPECT_EQ(count_cusps(c), 0);
}

TEST(SampleHedgehog, TranslateDifferenceIsAPoint) {
  const Vec w = make_vec({0.3, -0.7});
  const auto hk = PlanarSupport::ball(make_vec({0, 0}), 1.0);
  const auto hl = PlanarSupport::ball(w, 1.0);
  for (const auto& s : sample_hedgehog(hk, hl, 128).samples) {
    EXPECT_LT((s.point + w).norm(), 1e-12);
    EXPECT_NEAR(s.radius, 0.0, 1e-12);
  }
}

TEST(SampleHedgehog, PointFormula) {
  const PlanarSupport e = PlanarSupport::ellipse(make_vec({0.2, 0.1}), 1.2, 0.8);
  const PlanarSupport one = PlanarSupport::constant(1.0);
  const auto c = sample_hedgehog(e, one, 64);
  for (const auto& s : c.samples) {
    const double h = e.h(s.theta) - 1.0;
    const double dh = (e.h(s.theta + 1e-6) - e.h(s.theta - 1e-6)) / 2e-6;
    const Vec u = make_vec({std::cos(s.theta), std::sin(s.theta)});
    const Vec t = make_vec({-std::sin(s.theta), std::cos(s.theta)});
    EXPECT_LT((s.point - (h * u + dh * t)).norm(), 1e-8);
  }
  EXPECT_THROW(sample_hedgehog(e, one, 15), ValidationError);
}

TEST(CountCusps, TrefoilHasSix) {
  const PlanarSupport hk = trefoil();
  EXPECT_EQ(dense_sign_changes([&](double t) { return hk.h(t) - 1.0; }), 6);
  const auto c = sample_hedgehog(hk, PlanarSupport::constant(1.0), 512);
  EXPECT_EQ(count_cusps(c), 6);
  ASSERT_EQ(c.cusps.size(), 6u);
  // R = -0.8 cos 3t vanishes at pi/6 + k pi/3.
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(c.cusps[k], kPi / 6 + k * kPi / 3, 1e-9);
}

TEST(CountCusps, EllipseMinusDiscHasFour) {
  const PlanarSupport e = PlanarSupport::ellipse(make_vec({0, 0}), 1.2, 0.8);
  EXPECT_EQ(dense_sign_changes([&](double t) { return e.h(t) - 1.0; }), 4);
  EXPECT_EQ(count_cusps(sample_hedgehog(e, PlanarSupport::constant(1.0), 512)), 4);
  // Numeric derivatives give the same count.
  const PlanarSupport numeric([](double t) {
    return std::sqrt(1.44 * std::cos(t) * std::cos(t) + 0.64 * std::sin(t) * std::sin(t));
  });
  EXPECT_FALSE(numeric.has_derivatives());
  EXPECT_EQ(count_cusps(sample_hedgehog(numeric, PlanarSupport::constant(1.0), 512)), 4);
}

TEST(CountCusps, RequiresEnoughSamples) {
  const auto c = sample_hedgehog(trefoil(), PlanarSupport::constant(1.0), 32);
  EXPECT_THROW(count_cusps(c), ValidationError);
}

TEST(HedgehogConsistency, MatchesVirtualPoint) {
  const Body k = Body::ellipsoid(make_vec({0.2, 0.1}), make_vec({1.2, 0.8}));
  const Body l = Body::ball(make_vec({-0.3, 0.4}), 1.0);
  const VirtualBody v(k, l);
  const auto c = sample_hedgehog(PlanarSupport::ellipse(make_vec({0.2, 0.1}), 1.2, 0.8),
                                 PlanarSupport::ball(make_vec({-0.3, 0.4}), 1.0), 128);
  for (const auto& s : c.samples) {
    EXPECT_LT((s.point - virtual_point(v, Direction::from_angle(s.theta))).norm(), 1e-6);
  }
}

TEST(HedgehogConsistency, TranslationInvariance) {
  const Vec shift = make_vec({1.5, -2.0});
  const auto base = sample_hedgehog(trefoil(), PlanarSupport::constant(1.0), 200);
  const auto moved = sample_hedgehog(trefoil() + PlanarSupport::ball(shift, 1.0),
                                     PlanarSupport::constant(1.0) + PlanarSupport::ball(shift, 1.0), 200);
  ASSERT_EQ(base.samples.size(), moved.samples.size());
  for (std::size_t i = 0; i < base.samples.size(); ++i) {
    EXPECT_LT((base.samples[i].point - moved.samples[i].point).norm(), 1e-12);
  }
}

TEST(HedgehogConsistency, TurnsAtCusps) {
  const auto hk = trefoil();
  const auto hl = PlanarSupport::constant(1.0);
  const auto x = hedgehog_map(hk, hl);
  const auto c = sample_hedgehog(hk, hl, 512);
  ASSERT_EQ(c.cusps.size(), 6u);
  for (double th : c.cusps) {
    const Direction u = Direction::from_angle(th);
    const TangentVector t(u, make_vec({-std::sin(th), std::cos(th)}));
    EXPECT_TRUE(detect_turn(x, u, t, 0.1, 12).is_turn()) << th;
  }
  // Away from the cusps the curve is locally convex and the map is tame.
  const Direction u = Direction::from_angle(0.0);
  EXPECT_FALSE(detect_turn(x, u, tangent_basis(u)[0], 0.1, 12).is_turn());
}

TEST(HedgehogOutput, SvgMarkersAndCsv) {
  const auto c = sample_hedgehog(trefoil(), PlanarSupport::constant(1.0), 512);
  std::ostringstream svg;
  write_hedgehog_svg(c, svg);
  EXPECT_EQ(count_markers(svg.str()), static_cast<std::size_t>(count_cusps(c)));
  EXPECT_NE(svg.str().find("<polyline"), std::string::npos);
  EXPECT_NE(svg.str().find("viewBox"), std::string::npos);

  const auto circle = sample_hedgehog(PlanarSupport::constant(2.0), PlanarSupport::constant(1.0), 128);
  std::ostringstream plain;
  write_hedgehog_svg(circle, plain);
  EXPECT_EQ(count_markers(plain.str()), 0u);

  std::ostringstream csv;
  write_hedgehog_csv(c, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "theta,x,y,R");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, c.samples.size());
}

TEST(HedgehogOutput, RenderSvgFile) {
  const auto c = sample_hedgehog(trefoil(), PlanarSupport::constant(1.0), 256);
  const auto path = std::filesystem::temp_directory_path() / "vh_hedgehog_test.svg";
  render_svg(c, path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(count_markers(ss.str()), 6u);
  std::filesystem::remove(path);
  EXPECT_THROW(render_svg(c, "/nonexistent-dir/x/y.svg"), std::runtime_error);
}

TEST(Expression, ParseEvaluateDifferentiate) {
  const auto e = Expression::parse("1 + 0.1cos(3t)");
  EXPECT_NEAR(e(0.0), 1.1, 1e-15);
  EXPECT_NEAR(e.derivative()(kPi / 6), -0.3, 1e-15);
  EXPECT_NEAR(e.derivative().derivative()(0.0), -0.9, 1e-15);
  EXPECT_NEAR(Expression::parse("-2*sin(t)/4 + pi")(kPi / 2), kPi - 0.5, 1e-15);
  EXPECT_NEAR(Expression::parse("2cos(t)sin(t)")(0.3), std::sin(0.6), 1e-15);
  EXPECT_NEAR(Expression::parse("t/(1+t)").derivative()(1.0), 0.25, 1e-15);
  EXPECT_THROW(Expression::parse("1 +"), ValidationError);
  EXPECT_THROW(Expression::parse("cos(t"), ValidationError);
  EXPECT_THROW(Expression::parse("tan(t)"), ValidationError);
  EXPECT_THROW(Expression::parse(""), ValidationError);
}
