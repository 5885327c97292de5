#include <credal/ar.hpp>
#include <credal/ar_plus.hpp>
#include <credal/bnb.hpp>
#include <credal/exact.hpp>
#include <credal/harness.hpp>
#include <credal/local_search.hpp>

#include <benchmark/benchmark.h>

using namespace credal;

namespace {

CredalNetwork skeleton(std::size_t cats, std::size_t verts) {
  Rng rng(42);
  return harness::ten_node_skeleton({cats, cats}, {verts, verts}, rng);
}

void BM_PropagateAR(benchmark::State& state) {
  const auto net = skeleton(state.range(0), state.range(1));
  const std::size_t e = net.index_of("E");
  for (auto _ : state) benchmark::DoNotOptimize(ar::propagate(net, e, {}));
}
BENCHMARK(BM_PropagateAR)->Args({3, 2})->Args({3, 4})->Args({4, 2});

void BM_PropagatePlus(benchmark::State& state) {
  const auto net = skeleton(state.range(0), state.range(1));
  const std::size_t e = net.index_of("E");
  for (auto _ : state) benchmark::DoNotOptimize(ar_plus::propagate_plus(net, e, {}));
}
BENCHMARK(BM_PropagatePlus)->Args({3, 2})->Args({3, 4})->Args({4, 2})->Unit(benchmark::kMillisecond);

void BM_LocalSearch(benchmark::State& state) {
  const auto net = skeleton(3, 2);
  const std::size_t e = net.index_of("E");
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_search::multistart(net, e, 0, {}, Direction::Maximize, 8, rng));
  }
}
BENCHMARK(BM_LocalSearch)->Unit(benchmark::kMillisecond);

void BM_BranchAndBound(benchmark::State& state) {
  const auto net = skeleton(3, 2);
  const std::size_t e = net.index_of("E");
  bnb::SolveOptions opts;
  opts.bounds = state.range(0) == 0 ? bnb::BoundAlgorithm::kARPlus : bnb::BoundAlgorithm::kAR;
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    Rng rng(7);
    const auto r = bnb::solve(net, e, 0, {}, Direction::Maximize, opts, rng);
    nodes = r.stats.nodes_expanded;
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_BranchAndBound)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Exhaustive(benchmark::State& state) {
  Rng rng(3);
  const auto net = harness::random_polytree({7, {2, 3}, {2, 2}, 0}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(exact::exhaustive_bounds_all(net, 0, {}));
}
BENCHMARK(BM_Exhaustive)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
