#include "ampsim/sweep.hpp"

#include <benchmark/benchmark.h>

using namespace ampsim;

namespace {

const Stimulus kDrive{60e-6, 60e-6, 1000.0, 0.0};

SimConfig sim_steps(std::size_t n) {
    SimConfig cfg;
    cfg.n_steps = n;
    return cfg;
}

void BM_ThdSingle(benchmark::State& state) {
    const SimConfig cfg = sim_steps(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(measure_thd({-50.0, 10.0}, CircuitConfig{}, kDrive, cfg));
}

void BM_ThdSingleRc(benchmark::State& state) {
    CircuitConfig rc;
    rc.c_load = 250e-9;
    const SimConfig cfg = sim_steps(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(measure_thd({-50.0, 10.0}, rc, kDrive, cfg));
}

void BM_SurfaceSerial(benchmark::State& state) {
    const SweepGrid g = SweepGrid::open_rectangle(-200.0, 10.0, 4, 4);
    const SimConfig cfg = sim_steps(60'001);
    for (auto _ : state) benchmark::DoNotOptimize(thd_surface_serial(g, CircuitConfig{}, kDrive, cfg));
}

void BM_SurfaceParallel(benchmark::State& state) {
    const SweepGrid g = SweepGrid::open_rectangle(-200.0, 10.0, 4, 4);
    const SimConfig cfg = sim_steps(60'001);
    for (auto _ : state) benchmark::DoNotOptimize(thd_surface(g, CircuitConfig{}, kDrive, cfg));
}

}  // namespace

BENCHMARK(BM_ThdSingle)->Arg(60'001)->Arg(200'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThdSingleRc)->Arg(60'001)->Arg(200'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurfaceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurfaceParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
