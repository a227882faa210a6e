#include "asianfb/analysis.hpp"
#include "asianfb/fbsolver.hpp"
#include "asianfb/numerics.hpp"
#include "asianfb/oracles.hpp"

#include <benchmark/benchmark.h>

using namespace asianfb;

namespace {

void BM_ThomasSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    TridiagonalSystem s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.sub[i] = i ? -0.4 : 0.0;
        s.super[i] = i + 1 < n ? -0.5 : 0.0;
        s.diag[i] = 2.0;
        s.rhs[i] = 1.0 / static_cast<double>(i + 1);
    }
    for (auto _ : state) benchmark::DoNotOptimize(thomas_solve(s));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ThomasSolve)->Arg(300)->Arg(3000);

void BM_TimeStep(benchmark::State& state) {
    ModelParams p;
    NumericalParams num;
    auto g = Grid::make(num, p.T);
    const double rho0 = initial_rho(AveragingMethod::arithmetic(), p);
    auto pi = initial_profile(rho0, g);
    for (auto _ : state)
        benchmark::DoNotOptimize(time_step(pi, rho0, 100, p, num, AveragingMethod::arithmetic(), g));
}
BENCHMARK(BM_TimeStep);

void BM_Solve(benchmark::State& state) {
    NumericalParams num;
    num.m = static_cast<int>(state.range(0));
    SolveOptions options;
    options.keep_field = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(ModelParams{}, num, AveragingMethod::geometric(), options));
}
BENCHMARK(BM_Solve)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_PsorBoundary(benchmark::State& state) {
    oracles::LcpGridSpec spec;
    spec.nx = 201;
    spec.mt = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(oracles::psor_boundary(ModelParams{}, AveragingMethod::arithmetic(), spec));
}
BENCHMARK(BM_PsorBoundary)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FitEval(benchmark::State& state) {
    const auto model = analysis::FitModel::published();
    double sigma = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analysis::fit_eval(model, 0.06, 0.04, sigma, 50.0));
        sigma = sigma < 0.8 ? sigma + 1e-6 : 0.2;
    }
}
BENCHMARK(BM_FitEval);

} // namespace

BENCHMARK_MAIN();
