#include <credal/geometry.hpp>
#include <credal/random.hpp>

#include <benchmark/benchmark.h>

using namespace credal;

namespace {

std::vector<geometry::Point> cloud(std::size_t dim, std::size_t count) {
  Rng rng(9);
  std::vector<geometry::Point> pts;
  for (std::size_t i = 0; i < count; ++i) pts.push_back(geometry::sample_simplex(dim, rng));
  return pts;
}

// Simplex points in 3, 4 and 5 categories exercise the planar hull, the
// spatial hull and the LP test.
void BM_PruneRedundant(benchmark::State& state) {
  const auto pts = cloud(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(geometry::prune_redundant(pts, pts.size()));
}
BENCHMARK(BM_PruneRedundant)
    ->Args({3, 256})
    ->Args({4, 256})
    ->Args({4, 2048})
    ->Args({5, 256})
    ->Unit(benchmark::kMicrosecond);

void BM_IntervalCredalVertices(benchmark::State& state) {
  IntervalPotential box(state.range(0), ProbabilityInterval{0.05, 0.6});
  for (auto _ : state) benchmark::DoNotOptimize(geometry::interval_credal_vertices(box));
}
BENCHMARK(BM_IntervalCredalVertices)->Arg(3)->Arg(6)->Arg(10);

}  // namespace
