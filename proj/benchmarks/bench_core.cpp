#include <benchmark/benchmark.h>

#include "hip/factorization.hpp"
#include "hip/forward.hpp"
#include "hip/inversion.hpp"
#include "hip/presets.hpp"

using namespace hip;

static void BM_Solve(benchmark::State& state) {
    const Grid g(static_cast<int>(state.range(0)));
    const DirichletSystem sys = assemble(presets::bump_sigma(g));
    const ScalarField f = presets::linear_x(g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(sys, f, ScalarField(g)));
}
BENCHMARK(BM_Solve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
    const Grid g(static_cast<int>(state.range(0)));
    const Conductivity s = presets::bump_sigma(g);
    for (auto _ : state) benchmark::DoNotOptimize(assemble(s));
}
BENCHMARK(BM_Assemble)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_AssembleL(benchmark::State& state) {
    const Grid g(static_cast<int>(state.range(0)));
    const Conductivity s = presets::bump_sigma(g);
    const ScalarField u0 = solve_potential(s, presets::linear_x(g));
    for (auto _ : state) benchmark::DoNotOptimize(assemble_L(s, u0, 0.5));
}
BENCHMARK(BM_AssembleL)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Differential(benchmark::State& state) {
    const Grid g(static_cast<int>(state.range(0)));
    const LinearizationBundle b(presets::bump_sigma(g), presets::linear_x(g), 1.0);
    const ScalarField h = presets::random_bump(g, 1);
    for (auto _ : state) benchmark::DoNotOptimize(differential(b, h));
}
BENCHMARK(BM_Differential)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Adjoint(benchmark::State& state) {
    const Grid g(static_cast<int>(state.range(0)));
    const LinearizationBundle b(presets::bump_sigma(g), presets::linear_x(g), 1.0);
    const ScalarField r = presets::random_bump(g, 2);
    for (auto _ : state) benchmark::DoNotOptimize(apply_dF_adjoint(b, r));
}
BENCHMARK(BM_Adjoint)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_LSpectralBound(benchmark::State& state) {
    const Grid g(static_cast<int>(state.range(0)));
    const ProjectedGradientOperator op =
        assemble_L(presets::constant_sigma(g, 1.0), presets::linear_x(g), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(l_spectral_bound(op));
}
BENCHMARK(BM_LSpectralBound)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
