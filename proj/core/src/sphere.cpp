#include "vh/sphere.hpp"

#include "vh/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>

namespace vh {

namespace {

void require_dim(int dim) {
  if (dim != 2 && dim != 3) {
    throw ValidationError("dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

/// Uniform grid over R^n keyed by integer cell coordinates. Used to find
/// all members within a chord distance of a query point.
class CellIndex {
 public:
  CellIndex(std::span<const Direction> points, double cell) : points_(points), cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      cells_[key(cell_of(points[i].vec()))].push_back(static_cast<int>(i));
    }
  }

  /// Smallest angular distance to any member within one cell ring of q.
  double nearest(const Vec& q) const {
    const auto c = cell_of(q);
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(q.size());
    const int zr = n == 3 ? 1 : 0;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -zr; dz <= zr; ++dz) {
          auto it = cells_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == cells_.end()) continue;
          for (int idx : it->second) {
            best = std::min(best, sphere_distance(points_[static_cast<std::size_t>(idx)].vec(), q));
          }
        }
      }
    }
    return best;
  }

 private:
  std::array<std::int64_t, 3> cell_of(const Vec& p) const {
    std::array<std::int64_t, 3> c{0, 0, 0};
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor((p[i] + 1.0) / cell_));
    }
    return c;
  }

  static std::uint64_t key(const std::array<std::int64_t, 3>& c) {
    auto u = [](std::int64_t v) { return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1fffffULL; };
    return u(c[0]) | (u(c[1]) << 21) | (u(c[2]) << 42);
  }

  std::span<const Direction> points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

std::size_t probe_count_for(double eta) {
  const double wanted = 400.0 / (eta * eta);
  return static_cast<std::size_t>(std::clamp(wanted, 2.0e4, 2.0e6));
}

}  // namespace

Direction::Direction(const Vec& v) {
  require_dim(static_cast<int>(v.size()));
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("direction from a zero or non-finite vector");
  }
  // Already-unit input is kept bit-for-bit so serialization round-trips.
  v_ = std::abs(norm - 1.0) <= 4e-16 ? v : Vec(v / norm);
}

Direction Direction::axis(int dim, int k, double sign) {
  require_dim(dim);
  Vec v = Vec::Zero(dim);
  v[k] = sign >= 0 ? 1.0 : -1.0;
  return Direction(v);
}

Direction Direction::from_angle(double theta) {
  return Direction(make_vec({std::cos(theta), std::sin(theta)}));
}

bool Direction::approx_equal(const Direction& other, double tol) const {
  return dim() == other.dim() && (v_ - other.v_).cwiseAbs().maxCoeff() <= tol;
}

TangentVector::TangentVector(const Direction& base, const Vec& coords) : base_(base) {
  if (coords.size() != base.vec().size()) {
    throw ValidationError("tangent vector dimension mismatch");
  }
  if (std::abs(coords.norm() - 1.0) <= 4e-16 && std::abs(coords.dot(base.vec())) <= 1e-16) {
    t_ = coords;
    return;
  }
  Vec t = coords - coords.dot(base.vec()) * base.vec();
  const double norm = t.norm();
  if (!(norm > 1e-14)) throw ValidationError("tangent vector is parallel to its base");
  t /= norm;
  // One more projection pass keeps <t, u> at rounding level.
  t -= t.dot(base.vec()) * base.vec();
  t_ = t / t.norm();
}

// 2 atan2(|u - v|, |u + v|) equals arccos<u, v> for unit vectors and stays
// accurate near 0 and pi, where arccos of the clamped product does not.
double sphere_distance(const Vec& u, const Vec& v) {
  const double a = (u - v).norm();
  const double b = (u + v).norm();
  if (a == 0.0 && b == 0.0) return std::acos(clamp_unit(u.dot(v)));
  return 2.0 * std::atan2(a, b);
}

double sphere_distance(const Direction& u, const Direction& v) {
  return sphere_distance(u.vec(), v.vec());
}

Direction boxplus(const Direction& u, const TangentVector& t, double lambda) {
  if (!t.base().approx_equal(u)) {
    throw ValidationError("boxplus: tangent vector is not based at u");
  }
  return Direction(Vec(u.vec() + lambda * t.vec()));
}

std::vector<TangentVector> tangent_basis(const Direction& u) {
  const Vec& v = u.vec();
  if (u.dim() == 2) {
    return {TangentVector(u, make_vec({-v[1], v[0]}))};
  }
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(v[k]) < std::abs(v[axis]) - 1e-15) axis = k;
  }
  TangentVector b1(u, unit_axis(3, axis));
  Vec b2 = v.head<3>().cross(b1.vec().head<3>());
  return {b1, TangentVector(u, b2)};
}

std::vector<Direction> spiral_directions(int dim, std::size_t count) {
  require_dim(dim);
  std::vector<Direction> out;
  out.reserve(count);
  if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(Direction::from_angle(2.0 * kPi * static_cast<double>(i) / static_cast<double>(count)));
    }
    return out;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.push_back(Direction(make_vec({r * std::cos(phi), r * std::sin(phi), z})));
  }
  return out;
}

std::vector<Direction> random_directions(int dim, std::size_t count, std::uint64_t seed) {
  require_dim(dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Direction> out;
  out.reserve(count);
  while (out.size() < count) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    if (v.norm() < 1e-12) continue;
    out.emplace_back(v);
  }
  return out;
}

double probe_covering_gap(std::span<const Direction> members, std::span<const Direction> probes,
                          double search_radius) {
  if (members.empty()) return std::numeric_limits<double>::infinity();
  const double radius = std::min(search_radius, kPi);
  const double chord = 2.0 * std::sin(radius / 2.0);
  CellIndex index(members, std::max(chord, 1e-6));
  double worst = 0.0;
  for (const auto& p : probes) {
    double d = index.nearest(p.vec());
    if (!(d <= radius)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, d);
  }
  return worst;
}

bool verify_covering(const EtaNet& net, std::size_t probe_count, std::uint64_t seed,
                     double* max_gap) {
  if (net.members.empty()) return false;
  const auto probes = random_directions(net.dim, probe_count, seed);
  // Search radius eta+: any probe farther than that already fails.
  const double gap = probe_covering_gap(net.members, probes, std::min(net.eta * 1.05, kPi));
  if (max_gap) *max_gap = gap;
  return gap < net.eta;
}

EtaNet build_eta_net(int dim, double eta, const NetOptions& options) {
  require_dim(dim);
  if (!(eta > 0.0) || eta > kPi) {
    throw ValidationError("eta must lie in (0, pi], got " + std::to_string(eta));
  }
  EtaNet net;
  net.dim = dim;
  net.eta = eta;
  if (dim == 2) {
    const double raw = std::ceil(2.0 * kPi / eta - 1e-9);
    const auto count = static_cast<std::size_t>(std::max(2.0, raw));
    if (count > options.size_cap) {
      throw ValidationError("eta too small: net needs " + std::to_string(count) +
                            " members, cap is " + std::to_string(options.size_cap));
    }
    net.members = spiral_directions(2, count);
    return net;
  }
  const std::size_t probes = probe_count_for(eta);
  const auto probe_set = random_directions(3, probes, options.probe_seed);
  const double target = options.probe_margin * eta;
  std::size_t count = static_cast<std::size_t>(std::max(4.0, std::floor(4.0 / (eta * eta))));
  while (true) {
    if (count > options.size_cap) {
      throw ValidationError("eta too small: covering not verified within the cap of " +
                            std::to_string(options.size_cap) + " members");
    }
    auto members = spiral_directions(3, count);
    const double gap = probe_covering_gap(members, probe_set, std::min(eta * 1.05, kPi));
    if (gap < target) {
      net.members = std::move(members);
      return net;
    }
    count *= 2;
  }
}

std::vector<TangentVector> tangent_eta_net(const Direction& u, double eta) {
  if (!(eta > 0.0)) throw ValidationError("tangent net: eta must be positive");
  const auto basis = tangent_basis(u);
  if (u.dim() == 2) return {basis[0], -basis[0]};
  const auto count = static_cast<std::size_t>(std::max(3.0, std::ceil(2.0 * kPi / eta - 1e-9)));
  std::vector<TangentVector> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count);
    out.emplace_back(u, Vec(std::cos(a) * basis[0].vec() + std::sin(a) * basis[1].vec()));
  }
  return out;
}

bool verify_tangent_covering(const Direction& u, std::span<const TangentVector> tangents,
                             double eta, double* max_gap) {
  if (tangents.empty()) return false;
  if (u.dim() == 2) {
    const Vec t = tangent_basis(u)[0].vec();
    bool plus = false;
    bool minus = false;
    for (const auto& s : tangents) {
      plus = plus || (s.vec() - t).norm() < 1e-9;
      minus = minus || (s.vec() + t).norm() < 1e-9;
    }
    if (max_gap) *max_gap = plus && minus ? 0.0 : kPi;
    return plus && minus;
  }
  const auto basis = tangent_basis(u);
  const auto probes = static_cast<std::size_t>(std::max(3600.0, 200.0 / eta));
  double worst = 0.0;
  for (std::size_t k = 0; k < probes; ++k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(probes);
    const Vec p = std::cos(a) * basis[0].vec() + std::sin(a) * basis[1].vec();
    double best = kPi;
    for (const auto& s : tangents) best = std::min(best, sphere_distance(p, s.vec()));
    worst = std::max(worst, best);
  }
  if (max_gap) *max_gap = worst;
  return worst < eta;
}

}  // namespace vh
