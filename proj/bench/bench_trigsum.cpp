// Grid evaluation of V_N on [0,1): serial reference, OpenMP direct kernel
// and the FFT route.

#include <benchmark/benchmark.h>

#include "wea/trigsum.hpp"
#include "wea/weights.hpp"

namespace {

struct Problem {
    std::vector<wea::cplx> w;
    std::vector<wea::Index> u;
    wea::ThetaGrid grid;
};

Problem make(std::int64_t n) {
    Problem p;
    p.w = wea::gen_weights(wea::WeightSpec::power_phase(0.5), 1, static_cast<wea::Index>(n) + 1);
    for (std::int64_t k = 1; k <= n; ++k) p.u.push_back(static_cast<wea::Index>(k));
    p.grid = wea::make_grid(static_cast<std::size_t>(4 * n));
    return p;
}

void BM_grid_serial(benchmark::State& st) {
    const auto p = make(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(wea::serial::eval_V_grid(p.w, p.u, p.grid));
    st.SetComplexityN(st.range(0));
}

void BM_grid_openmp(benchmark::State& st) {
    const auto p = make(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(wea::eval_V_grid(p.w, p.u, p.grid, wea::GridPath::direct));
    st.SetComplexityN(st.range(0));
}

void BM_grid_fft(benchmark::State& st) {
    const auto p = make(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(wea::eval_V_grid(p.w, p.u, p.grid, wea::GridPath::fft));
    st.SetComplexityN(st.range(0));
}

void BM_sup_V(benchmark::State& st) {
    const auto p = make(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(wea::sup_V(p.w, p.u));
}

} // namespace

BENCHMARK(BM_grid_serial)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_openmp)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_fft)->RangeMultiplier(4)->Range(256, 1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sup_V)->RangeMultiplier(4)->Range(1024, 1 << 17)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
