#include <benchmark/benchmark.h>

#include "stablecut/analysis.hpp"

namespace sc = stablecut;

namespace {

void BM_SampleMallows(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const sc::MallowsSampler sampler(0.5, sc::Interval{1, n});
    std::int64_t trial = 0;
    for (auto _ : state) {
        sc::RngStream rng(1, sc::StreamRole::Permutation, 0, trial++);
        benchmark::DoNotOptimize(sampler(rng));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleMallows)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SamplePrefs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const sc::MallowsParams params(0.5);
    std::int64_t trial = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sc::sample_prefs(params, sc::Interval{1, n}, 1, trial++));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SamplePrefs)->Arg(20)->Arg(60)->Arg(200);

void BM_GaleShapley(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto prefs = sc::sample_prefs(sc::MallowsParams(0.5), sc::Interval{1, n}, 7);
    for (auto _ : state) benchmark::DoNotOptimize(sc::gale_shapley(prefs, sc::Role::Man));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GaleShapley)->Arg(60)->Arg(200)->Arg(500);

void BM_CountStable(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto prefs = sc::sample_prefs(sc::MallowsParams(0.5), sc::Interval{1, n}, 11);
    for (auto _ : state) benchmark::DoNotOptimize(sc::count_stable(prefs));
}
BENCHMARK(BM_CountStable)->Arg(20)->Arg(40)->Arg(80);

void BM_EnumerateStable(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto prefs = sc::sample_prefs(sc::MallowsParams(0.5), sc::Interval{1, n}, 11);
    for (auto _ : state) benchmark::DoNotOptimize(sc::enumerate_stable(prefs));
}
BENCHMARK(BM_EnumerateStable)->Arg(20)->Arg(40);

void BM_CertifiedCuts(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto prefs = sc::sample_prefs(sc::MallowsParams(0.2), sc::Interval{1, n}, 13);
    for (auto _ : state) benchmark::DoNotOptimize(sc::certified_cuts(prefs));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CertifiedCuts)->Arg(60)->Arg(200)->Arg(500);

void BM_Decompose(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto method = state.range(1) == 0 ? sc::DecomposeMethod::Certified : sc::DecomposeMethod::Exact;
    const auto prefs = sc::sample_prefs(sc::MallowsParams(0.3), sc::Interval{1, n}, 17);
    for (auto _ : state) benchmark::DoNotOptimize(sc::decompose(prefs, method));
}
BENCHMARK(BM_Decompose)->Args({60, 0})->Args({60, 1})->Args({120, 0})->Args({120, 1});

void BM_ExactCutpoints(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto prefs = sc::sample_prefs(sc::MallowsParams(0.3), sc::Interval{1, n}, 19);
    for (auto _ : state) benchmark::DoNotOptimize(sc::exact_cutpoints(prefs));
}
BENCHMARK(BM_ExactCutpoints)->Arg(30)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
