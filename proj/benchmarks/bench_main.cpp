#include <benchmark/benchmark.h>

#include <cmath>

#include "pinning/disorder.hpp"
#include "pinning/kernel.hpp"
#include "pinning/polymer.hpp"
#include "pinning/thermo.hpp"

using namespace pinning;

namespace {

const InterArrivalLaw& half() {
    static const auto law = build_kernel({Stretched{0.5}, 4096});
    return law;
}

void BM_BuildKernel(benchmark::State& state) {
    const double zeta = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(build_kernel({Stretched{zeta}}).log_norm());
}
BENCHMARK(BM_BuildKernel)->Arg(25)->Arg(50)->Arg(75)->Unit(benchmark::kMillisecond);

void BM_LogPartition(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    const auto env = sample_environment(DisorderLaw::Gaussian, N, 1);
    for (auto _ : state) benchmark::DoNotOptimize(log_partition(half(), env.values(), {1.0, 0.0}, N));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LogPartition)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oNSquared);

void BM_ContactProfile(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    const auto env = sample_environment(DisorderLaw::Gaussian, N, 1);
    for (auto _ : state) benchmark::DoNotOptimize(contact_profile(half(), env.values(), {1.0, 0.0}, N).log_z);
}
BENCHMARK(BM_ContactProfile)->RangeMultiplier(2)->Range(64, 1024);

void BM_ContactCount(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    const auto env = sample_environment(DisorderLaw::Gaussian, N, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(contact_count_logweights(half(), env.values(), {1.0, 0.0}, N).log_z);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ContactCount)->RangeMultiplier(2)->Range(32, 256)->Complexity(benchmark::oNCubed);

void BM_BruteForce(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    const auto env = sample_environment(DisorderLaw::Gaussian, N, 1);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_log_partition(half(), env.values(), {1.0, 0.0}, N));
}
BENCHMARK(BM_BruteForce)->DenseRange(8, 16, 4);

void BM_PureFreeEnergy(benchmark::State& state) {
    const double h = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pure_free_energy(half(), h));
}
BENCHMARK(BM_PureFreeEnergy)->DenseRange(1, 4);

void BM_QuenchedEstimate(benchmark::State& state) {
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            quenched_free_energy_estimate(half(), DisorderLaw::Gaussian, {1.0, 0.0}, 256, 64, 1, threads)
                .mean_per_site);
}
BENCHMARK(BM_QuenchedEstimate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
