// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "elc/experiments.hpp"
#include "elc/integrator.hpp"

namespace {

using namespace elc;

constexpr double kTwoPi = 6.283185307179586;

State bench_state(std::size_t n) {
    PhysParams p;
    Grid grid(n, kTwoPi);
    InitSpec spec;
    spec.seed = 1;
    spec.velocity_amplitude = 0.25;
    spec.grad_d_target = 0.1;
    return build_initial_data(grid, p, spec, CalculusScheme::spectral);
}

void BM_gradient(benchmark::State& state) {
    Grid grid(static_cast<std::size_t>(state.range(0)), kTwoPi);
    PhysParams p;
    ScalarField rho = equilibrium_state(grid, p).rho;
    for (auto _ : state) {
        VectorField g = gradient(rho, CalculusScheme::spectral);
        benchmark::DoNotOptimize(g.raw().data());
    }
}
BENCHMARK(BM_gradient)->Arg(32)->Arg(64);

void BM_system_rhs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    State s = bench_state(n);
    PhysParams p;
    for (auto _ : state) {
        SystemRhs rhs = system_rhs(s, p, CalculusScheme::spectral);
        benchmark::DoNotOptimize(rhs.u_t.raw().data());
    }
}
BENCHMARK(BM_system_rhs)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_rk4_step(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    State s = bench_state(n);
    PhysParams p;
    SolverConfig cfg;
    const double dt = stable_dt(s, p, cfg);
    for (auto _ : state) {
        State next = step(s, p, cfg, CalculusScheme::spectral, dt);
        benchmark::DoNotOptimize(next.rho.raw().data());
    }
}
BENCHMARK(BM_rk4_step)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_run_record(benchmark::State& state) {
    State s = bench_state(32);
    PhysParams p;
    for (auto _ : state) {
        RunRecord rec = make_run_record(s, p, CalculusScheme::spectral, 1e-3);
        benchmark::DoNotOptimize(&rec);
    }
}
BENCHMARK(BM_run_record)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
