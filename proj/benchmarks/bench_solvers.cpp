#include <benchmark/benchmark.h>

#include "ccsim/experiments.hpp"
#include "ccsim/transient.hpp"

using namespace ccsim;

static void BM_SteadySolve(benchmark::State& state) {
    const ModelParams p = ModelParams::table1();
    const Grid1D grid = Grid1D::uniform(static_cast<int>(state.range(0)), p.geom.L);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_steady(p, grid));
    }
}
BENCHMARK(BM_SteadySolve)->Arg(401)->Arg(2001)->Arg(8001);

static void BM_EigenPair(benchmark::State& state) {
    const EigenInputs in = EigenInputs::from_params(ModelParams::table1());
    const Grid1D grid = Grid1D::uniform(static_cast<int>(state.range(0)), in.L);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_eigenpair(in, grid));
    }
}
BENCHMARK(BM_EigenPair)->Arg(401)->Arg(2001);

static void BM_TransientStep(benchmark::State& state) {
    const ModelParams p = ModelParams::table1();
    const Grid1D grid = Grid1D::uniform(static_cast<int>(state.range(0)), p.geom.L);
    TransientState s = initialize_flat(p, grid, p.ub_bar);
    const BoundarySignal ub = BoundarySignal::constant(p.ub_bar);
    const double dt = max_stable_dt(p, grid, Scheme::ExplicitEuler);
    StepWorkspace ws;
    for (auto _ : state) {
        step(s, p, ub, dt, Scheme::ExplicitEuler, ws);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransientStep)->Arg(401)->Arg(2001);

static void BM_ImplicitStep(benchmark::State& state) {
    const ModelParams p = ModelParams::table1(1e-3);
    const Grid1D grid = Grid1D::uniform(static_cast<int>(state.range(0)), p.geom.L);
    TransientState s = initialize_flat(p, grid, p.ub_bar);
    const BoundarySignal ub = BoundarySignal::constant(p.ub_bar);
    const double dt = max_stable_dt(p, grid, Scheme::ImplicitExchange);
    StepWorkspace ws;
    for (auto _ : state) {
        step(s, p, ub, dt, Scheme::ImplicitExchange, ws);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ImplicitStep)->Arg(401);

static void BM_FicCurve50(benchmark::State& state) {
    SweepSpec spec;
    spec.P_values = spaced_values(1e-8, 1e-5, 50, AxisSpacing::Log);
    spec.grid = Grid1D::uniform(2001, 2e-3);
    const ModelParams base = ModelParams::table1();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_fic_curve(spec, base));
    }
}
BENCHMARK(BM_FicCurve50);

BENCHMARK_MAIN();
