#include "vh/polytope.hpp"
#include "vh/sphere.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace vh;

namespace {

std::vector<Vec> gaussian_cloud(int dim, std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Vec v(dim);
    for (int c = 0; c < dim; ++c) v[c] = g(rng);
    pts.push_back(v);
  }
  return pts;
}

void BM_Hull3d(benchmark::State& state) {
  const auto pts = gaussian_cloud(3, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hull3d)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Hull2d(benchmark::State& state) {
  const auto pts = gaussian_cloud(2, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
}
BENCHMARK(BM_Hull2d)->RangeMultiplier(8)->Range(64, 32768);

void BM_HalfspaceIntersection(benchmark::State& state) {
  std::vector<Halfspace> hs;
  for (const auto& u : spiral_directions(3, static_cast<std::size_t>(state.range(0)))) hs.push_back({u, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(halfspace_intersection(3, hs));
}
BENCHMARK(BM_HalfspaceIntersection)->RangeMultiplier(4)->Range(16, 1024);

void BM_MinkowskiCombine(benchmark::State& state) {
  const Polytope p = convex_hull(gaussian_cloud(3, static_cast<std::size_t>(state.range(0)), 3));
  const Polytope q = convex_hull(gaussian_cloud(3, static_cast<std::size_t>(state.range(0)), 4));
  for (auto _ : state) benchmark::DoNotOptimize(minkowski_combine(p, q, 0.5));
}
BENCHMARK(BM_MinkowskiCombine)->Arg(32)->Arg(128);

void BM_EtaNet(benchmark::State& state) {
  const double eta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_eta_net(3, eta));
}
BENCHMARK(BM_EtaNet)->Arg(2)->Arg(5)->Arg(10);

}  // namespace
