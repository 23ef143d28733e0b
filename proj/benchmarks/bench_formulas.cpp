#include <benchmark/benchmark.h>

#include "sosb/enumerative.hpp"
#include "sosb/rankloci.hpp"
#include "sosb/symmetroid.hpp"

using namespace sosb;

static void BM_HarrisTu(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        for (int r = 1; r < n; ++r) benchmark::DoNotOptimize(harris_tu_degree(n, r));
}
BENCHMARK(BM_HarrisTu)->Arg(10)->Arg(20);

static void BM_HankelBuild(benchmark::State& state) {
    const HankelSpec spec = make_hankel_spec(3, 3);
    for (auto _ : state) benchmark::DoNotOptimize(build_hankel(spec));
}
BENCHMARK(BM_HankelBuild);

static void BM_QsJacobianRank(benchmark::State& state) {
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(qs_jacobian_rank(Seed{seed++}));
}
BENCHMARK(BM_QsJacobianRank);

static void BM_ClrNodes(benchmark::State& state) {
    const QuarticSurface S = clr_quartic(1.5);
    SymmetroidConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(find_nodes(S, cfg));
}
BENCHMARK(BM_ClrNodes);

BENCHMARK_MAIN();
