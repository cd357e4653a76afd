#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "conc/chaining.hpp"

namespace {

conc::chaining::FiniteMetricSpace random_space(std::size_t n) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pts(2 * n);
    for (auto& p : pts) p = u(rng);
    return conc::chaining::FiniteMetricSpace::euclidean(pts, 2);
}

void BM_GreedyGamma(benchmark::State& state) {
    const auto s = random_space(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto seq = conc::chaining::greedy_admissible_sequence(s);
        benchmark::DoNotOptimize(conc::chaining::gamma_value(s, seq, 2.0));
    }
}
BENCHMARK(BM_GreedyGamma)->RangeMultiplier(2)->Range(16, 256);

void BM_EntropyBound(benchmark::State& state) {
    const auto s = random_space(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(conc::chaining::entropy_integral_gamma_bound(s, 2.0));
}
BENCHMARK(BM_EntropyBound)->Arg(8)->Arg(12)->Arg(64);

void BM_GammaExact(benchmark::State& state) {
    const auto s = random_space(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(conc::chaining::gamma_exact_small(s, 2.0));
}
BENCHMARK(BM_GammaExact)->DenseRange(3, 6);

}  // namespace
