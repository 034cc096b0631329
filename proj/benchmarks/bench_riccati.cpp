#include <benchmark/benchmark.h>

#include <random>

#include "aoctrl/config.hpp"
#include "aoctrl/hinf.hpp"
#include "aoctrl/pipeline.hpp"
#include "aoctrl/riccati.hpp"

using namespace aoctrl;

namespace {

const AoSystem& cached_system() {
    static const AoSystem sys = build_system(RunConfig{});
    return sys;
}

} // namespace

static void BM_GameRiccati(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Eigen::MatrixXd A(n, n), B1(n, n / 2 + 1), B2(n, n / 3 + 1), C1(n / 2 + 1, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = g(rng);
    B1.setRandom();
    B2.setRandom();
    C1.setRandom();
    const double gamma = 8.0 * (1.0 + B1.norm());
    for (auto _ : state) {
        auto out = solve_game_riccati(A, B1, B2, C1, gamma);
        benchmark::DoNotOptimize(&out);
    }
}
BENCHMARK(BM_GameRiccati)->Arg(10)->Arg(25)->Arg(50);

static void BM_SynthesizeDefaultPlant(benchmark::State& state) {
    const StandardPlant& plant = cached_system().plant;
    for (auto _ : state) {
        auto at = synthesize(plant, 0.1);
        benchmark::DoNotOptimize(&at);
    }
}
BENCHMARK(BM_SynthesizeDefaultPlant)->Unit(benchmark::kMillisecond);
