#include <benchmark/benchmark.h>

#include "aoctrl/plant.hpp"
#include "aoctrl/plate.hpp"
#include "aoctrl/zernike.hpp"

using namespace aoctrl;

static void BM_SolveModeShapes(benchmark::State& state) {
    const PhysicalParams params;
    for (auto _ : state) {
        auto shapes = solve_mode_shapes(params, 5, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(shapes.data());
    }
}
BENCHMARK(BM_SolveModeShapes)->Arg(4)->Arg(12);

static void BM_GramMatrix(benchmark::State& state) {
    const PhysicalParams params;
    std::vector<PlateMode> basis = expand_basis(solve_mode_shapes(params, 5, 12));
    basis.resize(19);
    for (auto _ : state) {
        Eigen::MatrixXd M = gram_matrix(basis);
        benchmark::DoNotOptimize(M.data());
    }
}
BENCHMARK(BM_GramMatrix);

static void BM_Projection(benchmark::State& state) {
    const PhysicalParams params;
    std::vector<PlateMode> basis = expand_basis(solve_mode_shapes(params, 5, 12));
    basis.resize(19);
    const auto zernikes = zernike_modes(4, 15);
    for (auto _ : state) {
        Eigen::MatrixXd Q = build_projection(zernikes, basis, params.radius);
        benchmark::DoNotOptimize(Q.data());
    }
}
BENCHMARK(BM_Projection);
