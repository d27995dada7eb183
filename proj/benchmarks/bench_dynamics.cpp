#include <benchmark/benchmark.h>

#include "dwal/dynamics.hpp"
#include "dwal/grid.hpp"
#include "dwal/model.hpp"
#include "dwal/propagator.hpp"

using namespace dwal;

namespace {

struct Fixture {
    PhysicalConfig cfg;
    ContinuumGrid grid;
    DerivedParams params;
    AmplitudeState y0;

    explicit Fixture(int m_modes) {
        cfg.Lambda = 100.0;
        cfg.eta = 1.7;
        grid = build_grid(cfg.Lambda, cfg.omega_z, m_modes, 300.0);
        params = derive_params(cfg);
        params.S = grid.shift_S;
        y0 = init_state(cfg, grid);
    }
};

} // namespace

static void BM_rhs(benchmark::State& state) {
    Fixture f((int)state.range(0));
    AmplitudeState y = f.y0;
    for (int j = 0; j < f.grid.m_modes; ++j)
        y.c[j] = cplx{1e-3 * (j % 7), 1e-3 * (j % 5)};
    for (auto _ : state) {
        AmplitudeState dy = rhs(y, f.params, f.grid, false);
        benchmark::DoNotOptimize(dy);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_rhs)->Arg(400)->Arg(1500)->Arg(3000)->Complexity();

static void BM_integrate_one_second(benchmark::State& state) {
    Fixture f((int)state.range(0));
    EvolutionSpec spec;
    spec.t_end = 1.0;
    spec.tau = 2.0;
    spec.enforce_recurrence = false;
    for (auto _ : state) {
        Trajectory tr = integrate(f.y0, spec, f.params, f.grid, false);
        benchmark::DoNotOptimize(tr);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_integrate_one_second)->Arg(400)->Arg(1500)->Arg(3000)
    ->Unit(benchmark::kMillisecond)->Complexity();

static void BM_build_grid(benchmark::State& state) {
    for (auto _ : state) {
        ContinuumGrid g = build_grid(100.0, 200.0, (int)state.range(0), 300.0);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_build_grid)->Arg(1500)->Arg(3000);

static void BM_exact_propagate(benchmark::State& state) {
    Fixture f((int)state.range(0));
    for (auto _ : state) {
        AmplitudeState y = exact_propagate(f.y0, 5.0, f.params, f.grid);
        benchmark::DoNotOptimize(y);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_exact_propagate)->Arg(100)->Arg(200)->Arg(400)
    ->Unit(benchmark::kMillisecond)->Complexity();

static void BM_tail_shift(benchmark::State& state) {
    for (auto _ : state) {
        double s = tail_shift(100.0, 200.0, 300.0);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_tail_shift);

BENCHMARK_MAIN();
