#include "vh/hedgehog.hpp"

#include "vh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace vh {

PlanarSupport::PlanarSupport(Fn h) : h_(std::move(h)) {}

PlanarSupport::PlanarSupport(Fn h, Fn d1, Fn d2) : h_(std::move(h)), d1_(std::move(d1)), d2_(std::move(d2)) {}

PlanarSupport PlanarSupport::constant(double c) {
  return PlanarSupport([c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; });
}

PlanarSupport PlanarSupport::ball(const Vec& center, double radius) {
  if (center.size() != 2) throw ValidationError("planar support needs a 2D center");
  const double cx = center[0];
  const double cy = center[1];
  return PlanarSupport([=](double t) { return cx * std::cos(t) + cy * std::sin(t) + radius; },
                       [=](double t) { return -cx * std::sin(t) + cy * std::cos(t); },
                       [=](double t) { return -cx * std::cos(t) - cy * std::sin(t); });
}

PlanarSupport PlanarSupport::ellipse(const Vec& center, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("ellipse semi-axes must be positive");
  const PlanarSupport shift = ball(center, 0.0);
  const double a2 = a * a;
  const double b2 = b * b;
  auto s = [=](double t) { return a2 * std::cos(t) * std::cos(t) + b2 * std::sin(t) * std::sin(t); };
  auto s1 = [=](double t) { return (b2 - a2) * std::sin(2.0 * t); };
  auto s2 = [=](double t) { return 2.0 * (b2 - a2) * std::cos(2.0 * t); };
  PlanarSupport centred([=](double t) { return std::sqrt(s(t)); },
                        [=](double t) { return s1(t) / (2.0 * std::sqrt(s(t))); },
                        [=](double t) {
                          const double v = s(t);
                          const double d = s1(t);
                          return (2.0 * v * s2(t) - d * d) / (4.0 * v * std::sqrt(v));
                        });
  return shift + centred;
}

PlanarSupport PlanarSupport::expression(const std::string& text) {
  const Expression e = Expression::parse(text);
  const Expression e1 = e.derivative();
  const Expression e2 = e1.derivative();
  return PlanarSupport(e, e1, e2);
}

double PlanarSupport::d1(double theta, double step) const {
  if (d1_) return d1_(theta);
  return (h_(theta + step) - h_(theta - step)) / (2.0 * step);
}

double PlanarSupport::d2(double theta, double step) const {
  if (d2_) return d2_(theta);
  return (h_(theta + step) - 2.0 * h_(theta) + h_(theta - step)) / (step * step);
}

PlanarSupport PlanarSupport::operator-(const PlanarSupport& o) const {
  const Fn h = [a = h_, b = o.h_](double t) { return a(t) - b(t); };
  if (has_derivatives() && o.has_derivatives()) {
    return PlanarSupport(h, [a = d1_, b = o.d1_](double t) { return a(t) - b(t); },
                         [a = d2_, b = o.d2_](double t) { return a(t) - b(t); });
  }
  return PlanarSupport(h);
}

PlanarSupport PlanarSupport::operator+(const PlanarSupport& o) const {
  const Fn h = [a = h_, b = o.h_](double t) { return a(t) + b(t); };
  if (has_derivatives() && o.has_derivatives()) {
    return PlanarSupport(h, [a = d1_, b = o.d1_](double t) { return a(t) + b(t); },
                         [a = d2_, b = o.d2_](double t) { return a(t) + b(t); });
  }
  return PlanarSupport(h);
}

namespace {

Vec curve_point(const PlanarSupport& h, double theta, double step) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double v = h.h(theta);
  const double d = h.d1(theta, step);
  return make_vec({v * c - d * s, v * s + d * c});
}

}  // namespace

HedgehogCurve sample_hedgehog(const PlanarSupport& hk, const PlanarSupport& hl, int n) {
  if (n < 16) throw ValidationError("hedgehog sampling needs at least 16 samples");
  const PlanarSupport h = hk - hl;
  const double step = 2.0 * kPi / (8.0 * n);
  auto radius = [&](double t) { return h.h(t) + h.d2(t, step); };
  HedgehogCurve curve;
  curve.samples.reserve(static_cast<std::size_t>(n));
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    curve.samples.push_back({t, curve_point(h, t, step), radius(t)});
    scale = std::max(scale, std::abs(h.h(t)));
  }
  // Radii below this are treated as zero so that identically vanishing R
  // (translate pairs) does not produce rounding-noise cusps.
  const double zero = 1e-12 * std::max(1.0, scale);
  auto sign = [&](double r) { return r > zero ? 1 : (r < -zero ? -1 : 0); };
  int last = -1;
  for (int i = 0; i < 2 * n && last < 0; ++i) {
    if (sign(curve.samples[static_cast<std::size_t>(i % n)].radius) != 0) last = i % n;
  }
  if (last < 0) return curve;
  int prev = last;
  for (int k = 1; k <= n; ++k) {
    const int i = (last + k) % n;
    const int si = sign(curve.samples[static_cast<std::size_t>(i)].radius);
    if (si == 0) continue;
    const int sp = sign(curve.samples[static_cast<std::size_t>(prev)].radius);
    if (si != sp) {
      double lo = curve.samples[static_cast<std::size_t>(prev)].theta;
      double hi = curve.samples[static_cast<std::size_t>(i)].theta;
      if (hi <= lo) hi += 2.0 * kPi;
      const double rlo = radius(lo);
      for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((radius(mid) > 0.0) == (rlo > 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      double c = 0.5 * (lo + hi);
      c = std::fmod(c, 2.0 * kPi);
      if (c < 0.0) c += 2.0 * kPi;
      curve.cusps.push_back(c);
    }
    prev = i;
  }
  std::sort(curve.cusps.begin(), curve.cusps.end());
  return curve;
}

int count_cusps(const HedgehogCurve& curve) {
  if (curve.samples.size() < 64) throw ValidationError("cusp counting needs at least 64 samples");
  return static_cast<int>(curve.cusps.size());
}

DirectionMap hedgehog_map(const PlanarSupport& hk, const PlanarSupport& hl, double step) {
  const PlanarSupport h = hk - hl;
  return [h, step](const Direction& u) {
    if (u.dim() != 2) throw ValidationError("planar hedgehog map needs 2D directions");
    return curve_point(h, std::atan2(u[1], u[0]), step);
  };
}

void write_hedgehog_csv(const HedgehogCurve& curve, std::ostream& out) {
  out << std::setprecision(17) << "theta,x,y,R\n";
  for (const auto& s : curve.samples) {
    out << s.theta << ',' << s.point[0] << ',' << s.point[1] << ',' << s.radius << '\n';
  }
}

void write_hedgehog_svg(const HedgehogCurve& curve, std::ostream& out) {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool first = true;
  for (const auto& s : curve.samples) {
    if (first) {
      xmin = xmax = s.point[0];
      ymin = ymax = s.point[1];
      first = false;
    }
    xmin = std::min(xmin, s.point[0]);
    xmax = std::max(xmax, s.point[0]);
    ymin = std::min(ymin, s.point[1]);
    ymax = std::max(ymax, s.point[1]);
  }
  double w = xmax - xmin;
  double hgt = ymax - ymin;
  const double extent = std::max({w, hgt, 1e-6});
  w = std::max(w, 1e-6 * extent);
  hgt = std::max(hgt, 1e-6 * extent);
  const double mx = 0.05 * std::max(w, hgt);
  out << std::setprecision(10);
  // SVG y grows downwards, so points are written as (x, -y).
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << xmin - mx << ' ' << -ymax - mx << ' '
      << w + 2 * mx << ' ' << hgt + 2 * mx << "\">\n";
  const double stroke = 0.004 * std::max(w, hgt);
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << stroke << "\" points=\"";
  for (const auto& s : curve.samples) out << s.point[0] << ',' << -s.point[1] << ' ';
  if (!curve.samples.empty()) out << curve.samples.front().point[0] << ',' << -curve.samples.front().point[1];
  out << "\"/>\n";
  // Cusp markers sit at the sample nearest to each cusp angle.
  for (double c : curve.cusps) {
    const HedgehogSample* best = nullptr;
    double gap = 1e300;
    for (const auto& s : curve.samples) {
      double d = std::abs(std::remainder(s.theta - c, 2.0 * kPi));
      if (d < gap) {
        gap = d;
        best = &s;
      }
    }
    if (!best) continue;
    out << "<circle class=\"cusp\" cx=\"" << best->point[0] << "\" cy=\"" << -best->point[1] << "\" r=\""
        << 3 * stroke << "\" fill=\"red\"/>\n";
  }
  out << "</svg>\n";
}

void render_svg(const HedgehogCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_hedgehog_svg(curve, out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace vh
