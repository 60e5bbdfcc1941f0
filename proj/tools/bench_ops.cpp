// Per-operation cost of the promise-mode structure on k-tree workloads.
#include <benchmark/benchmark.h>

#include "dtw/dyntw.hpp"
#include "dtw/oracle.hpp"

namespace {

void BM_Updates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  auto ops = dtw::oracle::random_update_stream(n, k, 2000, 7);
  for (auto _ : state) {
    dtw::DynTW d(n, dtw::DynConfig{.k = k});
    for (const auto& o : ops) {
      if (o.kind == '+')
        d.insert_edge(o.u, o.v);
      else
        d.delete_edge(o.u, o.v);
    }
    benchmark::DoNotOptimize(d.td().height());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(ops.size()));
}
BENCHMARK(BM_Updates)->Args({100, 1})->Args({1000, 1})->Args({1000, 2})->Unit(benchmark::kMillisecond);

void BM_Rebuild(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  dtw::DynGraph g(n);
  for (auto [u, v] : dtw::oracle::random_ktree(n, 2, rng)) g.add_edge(u, v);
  for (auto _ : state) benchmark::DoNotOptimize(dtw::fresh_decomposition(g, 2).size());
}
BENCHMARK(BM_Rebuild)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
