#pragma once

#include "vh/expr.hpp"
#include "vh/tameness.hpp"
#include "vh/vec.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vh {

/// 2 pi periodic planar support function h(theta), with closed-form first
/// and second derivatives when available.
class PlanarSupport {
 public:
  using Fn = std::function<double(double)>;

  /// Numeric derivatives are taken by central differences at sampling time.
  explicit PlanarSupport(Fn h);
  PlanarSupport(Fn h, Fn d1, Fn d2);

  static PlanarSupport constant(double c);
  /// Disc of radius r centred at c: h = <c, u> + r.
  static PlanarSupport ball(const Vec& center, double radius);
  /// Axis-aligned ellipse: h = <c, u> + sqrt(a^2 cos^2 + b^2 sin^2).
  static PlanarSupport ellipse(const Vec& center, double a, double b);
  /// Parsed expression in t, differentiated symbolically.
  static PlanarSupport expression(const std::string& text);

  double h(double theta) const { return h_(theta); }
  bool has_derivatives() const noexcept { return static_cast<bool>(d1_); }
  /// First and second derivative; `step` is used only without closed forms.
  double d1(double theta, double step) const;
  double d2(double theta, double step) const;

  PlanarSupport operator-(const PlanarSupport& other) const;
  PlanarSupport operator+(const PlanarSupport& other) const;

 private:
  Fn h_;
  Fn d1_;
  Fn d2_;
};

struct HedgehogSample {
  double theta;
  Vec point;
  /// Signed radius of curvature h + h''.
  double radius;
};

struct HedgehogCurve {
  std::vector<HedgehogSample> samples;
  /// Angles where R changes sign, refined by bisection.
  std::vector<double> cusps;
};

/// x(theta) = h u(theta) + h'(theta) t(theta) for h = hK - hL at N uniform
/// angles. Requires N >= 16.
HedgehogCurve sample_hedgehog(const PlanarSupport& hk, const PlanarSupport& hl, int n);

/// Number of sign changes of R over one period. Requires >= 64 samples.
int count_cusps(const HedgehogCurve& curve);

/// Direction map u -> x_{K,L}(u) of the planar difference body.
DirectionMap hedgehog_map(const PlanarSupport& hk, const PlanarSupport& hl, double step = 1e-5);

void write_hedgehog_csv(const HedgehogCurve& curve, std::ostream& out);
void write_hedgehog_svg(const HedgehogCurve& curve, std::ostream& out);
/// Writes the SVG to `path`; throws std::runtime_error on I/O failure.
void render_svg(const HedgehogCurve& curve, const std::string& path);

}  // namespace vh
