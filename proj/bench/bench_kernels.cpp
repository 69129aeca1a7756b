// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "sc/canonical.hpp"
#include "sc/corpus.hpp"
#include "sc/mining.hpp"
#include "sc/parallel.hpp"

using namespace sc;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

Raster noise(int side) {
  std::mt19937_64 rng(9);
  Raster r(side, side);
  for (auto& v : r.values) v = rng() % 4 == 0;
  return r;
}

void BM_RegionLabels(benchmark::State& st) {
  const auto r = noise(512);
  for (auto _ : st) benchmark::DoNotOptimize(region_labels(r, mode(st)));
}

void BM_CanonicalForms(benchmark::State& st) {
  std::mt19937_64 rng(3);
  std::vector<Structure> items;
  for (int i = 0; i < 200; ++i) {
    Structure s;
    const int n = 6 + static_cast<int>(rng() % 10);
    for (int k = 0; k < n; ++k) s.add_part("p" + std::to_string(k), rng() % 2 ? "a" : "b");
    for (int k = 1; k < n; ++k) s.add_relation(static_cast<std::size_t>(rng() % k), static_cast<std::size_t>(k), "e");
    items.push_back(std::move(s));
  }
  for (auto _ : st) benchmark::DoNotOptimize(canonical_forms(items, mode(st)));
}

void BM_AnalyzeCorpus(benchmark::State& st) {
  const auto items = polygon_corpus(42);
  const Config cfg;
  for (auto _ : st) benchmark::DoNotOptimize(analyze_corpus(items, cfg, mode(st)));
}

void BM_MineRules(benchmark::State& st) {
  const auto log = independent_log(42, 8, 2000, 0.05);
  const MiningConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(mine_rules(log, cfg, mode(st)));
}

}  // namespace

BENCHMARK(BM_RegionLabels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CanonicalForms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AnalyzeCorpus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MineRules)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
