#include <benchmark/benchmark.h>

#include "fockspectra/birman_schwinger.hpp"
#include "fockspectra/efimov.hpp"
#include "fockspectra/friedrichs.hpp"

using namespace fockspectra;

namespace {

ModelParams resonance_model() {
    return ModelParams::remark27(2.0, 1.0, ChannelFn::constant_one, 0.0, 1.0);
}

void BM_integrate_smooth(benchmark::State& state) {
    Grid grid = make_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        double v = integrate([](const TorusPoint& t) { return std::exp(std::cos(t[0])); }, grid);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_integrate_smooth)->Arg(16)->Arg(32);

void BM_delta(benchmark::State& state) {
    Grid grid = make_graded_grid(static_cast<int>(state.range(0)), 3);
    ModelParams m = resonance_model();
    m.c = tune_coupling(m, grid);
    for (auto _ : state) {
        double v = delta(m, TorusPoint{0.3, 0.1, -0.2}, -0.25, grid);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_delta)->Arg(16)->Arg(32);

void BM_assemble_T(benchmark::State& state) {
    Grid grid = make_graded_grid(static_cast<int>(state.range(0)), 3);
    ModelParams m = resonance_model();
    m.c = tune_coupling(m, grid);
    for (auto _ : state) {
        SymmetricKernelMatrix K = assemble_T(m, -0.1, grid);
        benchmark::DoNotOptimize(K.entries.data());
    }
}
BENCHMARK(BM_assemble_T)->Arg(6)->Arg(8);

void BM_count_above(benchmark::State& state) {
    Grid grid = make_graded_grid(8, 3);
    ModelParams m = resonance_model();
    m.c = tune_coupling(m, grid);
    SymmetricKernelMatrix K = assemble_T(m, -0.1, grid);
    for (auto _ : state) {
        EigenCount c = count_above(K.entries, 1.0);
        benchmark::DoNotOptimize(c.count);
    }
}
BENCHMARK(BM_count_above);

void BM_s_hat(benchmark::State& state) {
    EfimovParams ep = EfimovParams::from_ratio(1.0 / 3.0);
    double y = 0.0;
    for (auto _ : state) {
        double v = s_hat_eigenvalue(ep, 2, y);
        benchmark::DoNotOptimize(v);
        y += 1e-6;
    }
}
BENCHMARK(BM_s_hat);

} // namespace

BENCHMARK_MAIN();
