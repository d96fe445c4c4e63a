#pragma once

#include "vh/vec.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace vh {

/// Unit vector on S^{n-1}, n in {2, 3}. Renormalized on construction.
class Direction {
 public:
  explicit Direction(const Vec& v);

  static Direction axis(int dim, int k, double sign = 1.0);
  /// Planar direction (cos theta, sin theta).
  static Direction from_angle(double theta);

  const Vec& vec() const noexcept { return v_; }
  int dim() const noexcept { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[i]; }

  Direction operator-() const { return Direction(Vec(-v_)); }

  /// Componentwise comparison with tolerance 1e-9 by default.
  bool approx_equal(const Direction& other, double tol = kDirectionTolerance) const;

  static constexpr double kDirectionTolerance = 1e-9;

 private:
  Vec v_;
};

/// Unit vector t orthogonal to a base direction u (an element of T_u).
class TangentVector {
 public:
  /// Projects `coords` onto the orthogonal complement of `base` and
  /// normalizes. Throws ValidationError if the projection vanishes.
  TangentVector(const Direction& base, const Vec& coords);

  const Direction& base() const noexcept { return base_; }
  const Vec& vec() const noexcept { return t_; }
  int dim() const noexcept { return static_cast<int>(t_.size()); }

  TangentVector operator-() const { return TangentVector(base_, Vec(-t_)); }

 private:
  Direction base_;
  Vec t_;
};

struct EtaNet {
  int dim = 0;
  double eta = 0.0;
  std::vector<Direction> members;
};

struct NetOptions {
  std::size_t size_cap = 200000;
  std::uint64_t probe_seed = 0x5eedULL;
  /// Generation requires the probed gap to stay below this fraction of eta,
  /// absorbing the resolution of the probe sample.
  double probe_margin = 0.9;
};

/// Angular metric arccos<u, v> with the inner product clamped to [-1, 1].
double sphere_distance(const Direction& u, const Direction& v);
double sphere_distance(const Vec& u, const Vec& v);

/// (u + lambda t) / |u + lambda t|. Requires t.base() == u.
Direction boxplus(const Direction& u, const TangentVector& t, double lambda);

/// n-1 orthonormal tangent vectors at u, deterministic in u.
std::vector<TangentVector> tangent_basis(const Direction& u);

/// Deterministic eta-net of S^{n-1}. n = 2: uniform angular grid with
/// spacing <= eta. n = 3: golden-angle spiral, doubled until a probe
/// sample is covered. Throws ValidationError when the size cap is hit.
EtaNet build_eta_net(int dim, double eta, const NetOptions& options = {});

/// Finite subset of T_u covering T_u at angular radius eta.
std::vector<TangentVector> tangent_eta_net(const Direction& u, double eta);

/// Golden-angle spiral with `count` points (n = 3) or `count` uniform
/// angles (n = 2). Shared by net generation and dense direction sequences.
std::vector<Direction> spiral_directions(int dim, std::size_t count);

/// Uniform random probe directions (seeded, reproducible).
std::vector<Direction> random_directions(int dim, std::size_t count, std::uint64_t seed);

/// Largest distance from a probe to its nearest member. Returns +inf when
/// some probe has no member closer than `search_radius`.
double probe_covering_gap(std::span<const Direction> members,
                          std::span<const Direction> probes, double search_radius);

/// Probe-verified covering check: every probe within Delta-distance < eta.
bool verify_covering(const EtaNet& net, std::size_t probe_count, std::uint64_t seed,
                     double* max_gap = nullptr);

/// Verifies that `tangents` cover T_u at radius eta by dense probing of
/// the tangent circle (n = 3) or presence of both t and -t (n = 2).
bool verify_tangent_covering(const Direction& u, std::span<const TangentVector> tangents,
                             double eta, double* max_gap = nullptr);

}  // namespace vh
