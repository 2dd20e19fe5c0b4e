#include "omitlab/omitlab.hpp"

#include <benchmark/benchmark.h>

using namespace omit;

namespace {

const SystemParams kLargeK2{1e4, 1.0, 1e4, 1e4, 1e4, 1e4, 3e4, 1250.0};
const SystemParams kSmallK2{1e4, 1.0, 4e3, 10.0, 1e4, 1e4, 1e5, 5.91};

void BM_spectrum(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(spectrum(kLargeK2, -300.0, 300.0, n, ResponseMode::simplified, threads));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_spectrum)->UseRealTime()->Args({6001, 1})->Args({6001, 4})->Args({100001, 1})->Args({100001, 4});

void BM_response_full(benchmark::State& state) {
    double x = -1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eps_T(kLargeK2, x, ResponseMode::full));
        x += 1e-6;
    }
}
BENCHMARK(BM_response_full);

void BM_window_large_k2(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(perfect_window_large_k2(kLargeK2));
}
BENCHMARK(BM_window_large_k2);

void BM_window_general(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(perfect_window_general(kSmallK2));
}
BENCHMARK(BM_window_general);

void BM_sideband_dense(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(sideband_solve(kLargeK2, 1e4 - 1.25, SidebandMethod::dense));
}
BENCHMARK(BM_sideband_dense);

// Scaled units, omega_m = 1, a fixed 1e4-step stretch of RK4.
void BM_integrate(benchmark::State& state) {
    PhysicalParams partial;
    partial.g0 = 1e-3;
    PhysicalParams p = drive_for_target(kLargeK2.scaled(1e-4), partial).phys;
    p.eps_p = 1e-3 * p.eps_c;
    const double dt = default_oracle_step(p, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(p, 1.0, 1e4 * dt, dt, {{}, 0.0, 100}));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_integrate)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
