// Serial reference vs OpenMP backend for the dense pairwise kernels.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "helicity/kernels.hpp"

using namespace helicity;
using kernels::Backend;

namespace {

kernels::SourceSet random_sources(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    kernels::SourceSet s;
    for (std::size_t i = 0; i < n; ++i) s.push_back({u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)});
    return s;
}

Backend backend_of(const benchmark::State& state) { return state.range(1) == 0 ? Backend::Serial : Backend::OpenMP; }

void label(benchmark::State& state, double pairs) {
    state.SetLabel(state.range(1) == 0 ? "serial" : "openmp");
    state.counters["pairs/s"] = benchmark::Counter(pairs, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_BiotSavart(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const kernels::SourceSet src = random_sources(n, 1);
    const kernels::SourceSet tgt = random_sources(n, 2);
    std::vector<Vec3> out(n);
    for (auto _ : state) {
        kernels::biot_savart(src, tgt.pos, 0.0, out, backend_of(state));
        benchmark::DoNotOptimize(out.data());
    }
    label(state, static_cast<double>(n) * n);
}

void BM_Potential(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const kernels::SourceSet src = random_sources(n, 3);
    const kernels::SourceSet tgt = random_sources(n, 4);
    std::vector<Vec3> out(n);
    for (auto _ : state) {
        kernels::potential(src, tgt.pos, 0.0, out, backend_of(state));
        benchmark::DoNotOptimize(out.data());
    }
    label(state, static_cast<double>(n) * n);
}

void BM_GaussSelf(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const kernels::SourceSet s = random_sources(n, 5);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gauss_self_sum(s, backend_of(state)));
    label(state, 0.5 * static_cast<double>(n) * n);
}

void BM_GaussCross(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const kernels::SourceSet a = random_sources(n, 6);
    const kernels::SourceSet b = random_sources(n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gauss_cross_sum(a, b, backend_of(state)));
    label(state, static_cast<double>(n) * n);
}

void sizes(benchmark::internal::Benchmark* b) {
    for (long n : {1024, 4096, 16384})
        for (long backend : {0, 1}) b->Args({n, backend});
    b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_BiotSavart)->Apply(sizes);
BENCHMARK(BM_Potential)->Apply(sizes);
BENCHMARK(BM_GaussSelf)->Apply(sizes);
BENCHMARK(BM_GaussCross)->Apply(sizes);

BENCHMARK_MAIN();
