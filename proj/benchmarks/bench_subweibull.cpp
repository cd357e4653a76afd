#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "conc/subweibull.hpp"

namespace {

void BM_PsiNormGaussian(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
    for (auto& x : xs) x = g(rng);
    for (auto _ : state) benchmark::DoNotOptimize(conc::subweibull::estimate_psi_norm(xs, 2.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PsiNormGaussian)->Range(1 << 10, 1 << 18);

void BM_SumConcentrationBound(benchmark::State& state) {
    double eps = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(conc::subweibull::sum_concentration_bound(1.5, 1.0, 1000, eps));
        eps += 1e-9;
    }
}
BENCHMARK(BM_SumConcentrationBound);

}  // namespace
