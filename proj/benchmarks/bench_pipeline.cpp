#include "vh/constructions.hpp"
#include "vh/hedgehog.hpp"
#include "vh/reverse_gauss.hpp"

#include <benchmark/benchmark.h>

using namespace vh;

namespace {

RoundedBody rounded_cube() {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(make_vec({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0}));
  const Polytope c = convex_hull(pts);
  std::vector<Vec> z;
  for (std::size_t f = 0; f < c.facet_count(); ++f) z.push_back(c.facet_centroid(static_cast<int>(f)));
  return round_polytope(c, z, 0.2);
}

void BM_SolveRoundedCube(benchmark::State& state) {
  const RoundedBody rb = rounded_cube();
  SolverOptions opt;
  opt.warm_start = state.range(0) != 0;
  const auto dirs = random_directions(3, 64, 7);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_rounded(rb, dirs[i++ % dirs.size()], opt));
}
BENCHMARK(BM_SolveRoundedCube)->Arg(0)->Arg(1);

void BM_CertifyPlanar(benchmark::State& state) {
  const Body ball = Body::ball(make_vec({0, 0}), 1.0);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(certify_pair(ball, ball, k, k, k, 0.2));
}
BENCHMARK(BM_CertifyPlanar)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ApproximateEllipsoid(benchmark::State& state) {
  const Body e = Body::ellipsoid(make_vec({0, 0, 0}), make_vec({1.1, 1.0, 0.9}));
  const EtaNet net = build_eta_net(3, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(approximate_body(e, net, 0.7, 0.2));
}
BENCHMARK(BM_ApproximateEllipsoid)->Unit(benchmark::kMillisecond);

void BM_Hedgehog(benchmark::State& state) {
  const auto hk = PlanarSupport::expression("1 + 0.1cos(3t)");
  const auto hl = PlanarSupport::constant(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_hedgehog(hk, hl, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Hedgehog)->Arg(512)->Arg(4096);

}  // namespace
