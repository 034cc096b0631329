#include <benchmark/benchmark.h>

#include "aoctrl/config.hpp"
#include "aoctrl/pipeline.hpp"
#include "aoctrl/sim.hpp"

using namespace aoctrl;

namespace {

struct SimFixture {
    AoSystem sys;
    HinfController K;
    SimFixture() : sys(build_system(RunConfig{})) {
        RunConfig cfg;
        K = gamma_bisect(sys.plant, cfg.gamma.lo, cfg.gamma.hi, cfg.gamma.tol,
                         cfg.gamma.cap)
                .controller;
    }
};

const SimFixture& fixture() {
    static const SimFixture f;
    return f;
}

} // namespace

static void BM_ClosedLoopRun(benchmark::State& state) {
    const double duration = static_cast<double>(state.range(0)) / 10.0;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto r = run_closed_loop(fixture().sys.plant, fixture().K,
                                 fixture().sys.turbulence, 1e-4, duration, seed++,
                                 0.0);
        benchmark::DoNotOptimize(&r);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(duration / 1e-4));
}
BENCHMARK(BM_ClosedLoopRun)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_TurbulenceSample(benchmark::State& state) {
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto path = sample_path(fixture().sys.turbulence, 1e-4,
                                static_cast<int>(state.range(0)), seed++);
        benchmark::DoNotOptimize(path.data());
    }
}
BENCHMARK(BM_TurbulenceSample)->Arg(1000)->Arg(10000);
