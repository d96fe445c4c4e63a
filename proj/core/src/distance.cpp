#include "vh/distance.hpp"

#include "vh/errors.hpp"
#include "vh/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace vh {

int dim_of(const ConvexSet& s) {
  return std::visit([](const auto& x) { return x.dim(); }, s);
}

double support_value(const ConvexSet& s, const Direction& u) {
  return std::visit([&](const auto& x) { return support_value(x, u); }, s);
}

double hausdorff_support(const ConvexSet& a, const ConvexSet& b, std::span<const Direction> sample) {
  if (dim_of(a) != dim_of(b)) throw ValidationError("hausdorff_support: dimension mismatch");
  std::vector<double> diff(sample.size(), 0.0);
  parallel_for(sample.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      diff[i] = std::abs(support_value(a, sample[i]) - support_value(b, sample[i]));
    }
  });
  double worst = 0.0;
  for (double d : diff) worst = std::max(worst, d);
  return worst;
}

double hausdorff_support(const ConvexSet& a, const ConvexSet& b, const EtaNet& sample) {
  return hausdorff_support(a, b, std::span<const Direction>(sample.members));
}

std::vector<Direction> distance_sample(const Polytope& p, const EtaNet& base) {
  std::vector<Direction> out = base.members;
  for (const auto& f : p.facets()) out.push_back(f.normal);
  const Vec c = p.vertex_centroid();
  for (const auto& v : p.vertices()) {
    if ((v - c).norm() > 1e-12) out.emplace_back(Vec(v - c));
  }
  return out;
}

}  // namespace vh
