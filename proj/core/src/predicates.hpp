#pragma once

#include <Eigen/Core>

#include <cmath>

namespace vh::detail {

// Exact signs of orientation determinants. A floating-point filter
// decides most cases; the rest are evaluated with nonoverlapping
// floating-point expansions, which represent sums of doubles exactly.

namespace expansion {

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

/// Fixed-capacity expansion; the orientation determinant needs at most
/// 192 components.
struct Expansion {
  static constexpr int kCapacity = 256;
  double c[kCapacity];
  int n = 0;
};

/// out = e + b with zero components dropped. `out` may alias `e`.
inline void grow(const Expansion& e, double b, Expansion& out) {
  double q = b;
  int m = 0;
  double buf[Expansion::kCapacity];
  for (int i = 0; i < e.n; ++i) {
    double sum = 0.0;
    double err = 0.0;
    two_sum(q, e.c[i], sum, err);
    if (err != 0.0) buf[m++] = err;
    q = sum;
  }
  if (q != 0.0 || m == 0) buf[m++] = q;
  for (int i = 0; i < m; ++i) out.c[i] = buf[i];
  out.n = m;
}

inline void add_to(Expansion& e, const Expansion& f) {
  for (int i = 0; i < f.n; ++i) grow(e, f.c[i], e);
}

inline void scale_add(Expansion& acc, const Expansion& e, double b) {
  for (int i = 0; i < e.n; ++i) {
    double hi = 0.0;
    double lo = 0.0;
    two_product(e.c[i], b, hi, lo);
    if (lo != 0.0) grow(acc, lo, acc);
    grow(acc, hi, acc);
  }
}

/// acc += e * f.
inline void multiply_add(Expansion& acc, const Expansion& e, const Expansion& f) {
  for (int i = 0; i < f.n; ++i) scale_add(acc, e, f.c[i]);
}

inline Expansion difference(double a, double b) {
  double x = 0.0;
  double y = 0.0;
  two_sum(a, -b, x, y);
  Expansion e;
  if (y != 0.0) e.c[e.n++] = y;
  e.c[e.n++] = x;
  return e;
}

inline Expansion negated(Expansion e) {
  for (int i = 0; i < e.n; ++i) e.c[i] = -e.c[i];
  return e;
}

inline int sign(const Expansion& e) {
  for (int i = e.n - 1; i >= 0; --i) {
    if (e.c[i] > 0.0) return 1;
    if (e.c[i] < 0.0) return -1;
  }
  return 0;
}

}  // namespace expansion

/// Sign of the planar cross product (b - a) x (c - a).
inline int orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const Eigen::Vector2d u = b - a;
  const Eigen::Vector2d v = c - a;
  const double det = u[0] * v[1] - u[1] * v[0];
  const double bound = 1e-14 * (std::abs(u[0] * v[1]) + std::abs(u[1] * v[0]));
  if (det > bound) return 1;
  if (det < -bound) return -1;

  using namespace expansion;
  Expansion total;
  multiply_add(total, difference(b[0], a[0]), difference(c[1], a[1]));
  multiply_add(total, negated(difference(b[1], a[1])), difference(c[0], a[0]));
  return sign(total);
}

/// Sign of ((b - a) x (c - a)) . (d - a).
inline int orient3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                    const Eigen::Vector3d& d) {
  const Eigen::Vector3d u = b - a;
  const Eigen::Vector3d v = c - a;
  const Eigen::Vector3d w = d - a;
  const double t1 = u[1] * v[2] - u[2] * v[1];
  const double t2 = u[2] * v[0] - u[0] * v[2];
  const double t3 = u[0] * v[1] - u[1] * v[0];
  const double det = t1 * w[0] + t2 * w[1] + t3 * w[2];
  const double perm = (std::abs(u[1] * v[2]) + std::abs(u[2] * v[1])) * std::abs(w[0]) +
                      (std::abs(u[2] * v[0]) + std::abs(u[0] * v[2])) * std::abs(w[1]) +
                      (std::abs(u[0] * v[1]) + std::abs(u[1] * v[0])) * std::abs(w[2]);
  // Covers the rounding of the differences as well as of the products.
  const double bound = 1e-14 * perm;
  if (det > bound) return 1;
  if (det < -bound) return -1;

  using namespace expansion;
  Expansion du[3];
  Expansion dv[3];
  Expansion dw[3];
  for (int i = 0; i < 3; ++i) {
    du[i] = difference(b[i], a[i]);
    dv[i] = difference(c[i], a[i]);
    dw[i] = difference(d[i], a[i]);
  }
  auto minor = [&](int i, int j) {
    Expansion m;
    multiply_add(m, du[i], dv[j]);
    multiply_add(m, negated(du[j]), dv[i]);
    return m;
  };
  Expansion total;
  multiply_add(total, minor(1, 2), dw[0]);
  multiply_add(total, minor(2, 0), dw[1]);
  multiply_add(total, minor(0, 1), dw[2]);
  return sign(total);
}

}  // namespace vh::detail
