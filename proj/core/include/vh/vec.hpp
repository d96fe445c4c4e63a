#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <vector>

namespace vh {

/// Point or vector in R^2 or R^3. Dynamic size with a fixed capacity of 3,
/// so it never allocates.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

inline constexpr double kPi = 3.14159265358979323846;

inline Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Vec zero_vec(int dim) { return Vec::Zero(dim); }

inline Vec unit_axis(int dim, int axis) {
  Vec v = Vec::Zero(dim);
  v[axis] = 1.0;
  return v;
}

/// Convert to a plain std::vector (serialization helper).
inline std::vector<double> to_std(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vec from_std(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

}  // namespace vh
