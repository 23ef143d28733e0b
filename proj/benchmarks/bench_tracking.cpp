#include <benchmark/benchmark.h>

#include "sosb/solver.hpp"

using namespace sosb;

namespace {

PolySystem random_square_system(int nvars, int degree, std::uint64_t seed) {
    Rng rng(Seed{seed});
    std::vector<Polynomial> eqs;
    for (int i = 0; i < nvars; ++i) eqs.push_back(random_poly(nvars, degree, true, rng));
    return PolySystem(nvars, std::move(eqs));
}

}  // namespace

static void BM_PolynomialEval(benchmark::State& state) {
    Rng rng(Seed{1});
    const Polynomial p = random_poly(static_cast<int>(state.range(0)), 4, true, rng);
    Point x(static_cast<std::size_t>(state.range(0)));
    for (auto& c : x) c = rng.disk_complex();
    for (auto _ : state) benchmark::DoNotOptimize(p.eval(x));
}
BENCHMARK(BM_PolynomialEval)->Arg(3)->Arg(6)->Arg(10);

static void BM_SystemJacobian(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SystemEval eval(random_square_system(n, 2, 2));
    Rng rng(Seed{3});
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.disk_complex();
    for (auto _ : state) benchmark::DoNotOptimize(eval.jacobian_at(x));
}
BENCHMARK(BM_SystemJacobian)->Arg(4)->Arg(12)->Arg(28);

static void BM_NewtonCorrect(benchmark::State& state) {
    const PolySystem sys = random_square_system(6, 2, 4);
    const SystemEval eval(sys);
    Rng rng(Seed{5});
    Point x(6);
    for (auto& c : x) c = rng.disk_complex();
    for (auto _ : state) benchmark::DoNotOptimize(newton_correct(eval, x, 1e-10, 6));
}
BENCHMARK(BM_NewtonCorrect);

static void BM_TrackQuadricPath(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PolySystem target = random_square_system(n, 2, 6);
    const StartSystem start = total_degree_start(target, Seed{7});
    const Homotopy h(target, start.system, Cplx(0.8, 0.6));
    const TrackSession session(h);
    const TrackerConfig cfg;
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(session.track(start.roots[i % start.roots.size()], cfg));
        ++i;
    }
}
BENCHMARK(BM_TrackQuadricPath)->Arg(2)->Arg(4)->Arg(8);

static void BM_DedupeSolutions(benchmark::State& state) {
    Rng rng(Seed{9});
    std::vector<Point> pts;
    const long n = state.range(0);
    for (long i = 0; i < n; ++i) {
        const Cplx base = rng.disk_complex() * 10.0;
        pts.push_back({base});
        pts.push_back({base + Cplx(1e-11, 0.0)});
    }
    for (auto _ : state) benchmark::DoNotOptimize(dedupe_solutions(pts, 1e-8));
}
BENCHMARK(BM_DedupeSolutions)->Arg(1000)->Arg(20000);

BENCHMARK_MAIN();
