#include <benchmark/benchmark.h>

#include <vector>

#include "conc/coupling.hpp"
#include "conc/mixing.hpp"

namespace {

conc::mixing::MarkovChainSpec ring_chain(std::size_t m) {
    std::vector<std::vector<double>> rows(m, std::vector<double>(m, 0.0));
    for (std::size_t x = 0; x < m; ++x) {
        rows[x][x] = 0.5;
        rows[x][(x + 1) % m] = 0.3;
        rows[x][(x + m - 1) % m] = 0.2;
    }
    return conc::mixing::MarkovChainSpec::from_matrix(rows);
}

void BM_BetaSequence(benchmark::State& state) {
    const auto spec = ring_chain(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(conc::mixing::beta_sequence(spec, 50));
}
BENCHMARK(BM_BetaSequence)->Arg(3)->Arg(10)->Arg(50);

void BM_SimulateChain(benchmark::State& state) {
    const auto spec = conc::mixing::MarkovChainSpec::two_state(0.3, 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(conc::mixing::simulate_markov_chain(spec, static_cast<std::size_t>(state.range(0)), 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateChain)->Range(1 << 10, 1 << 16);

void BM_MaximalCoupling(benchmark::State& state) {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    const std::vector<double> q{0.25, 0.25, 0.25, 0.25};
    conc::Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(conc::coupling::maximal_coupling(p, q, rng));
}
BENCHMARK(BM_MaximalCoupling);

void BM_CoupledColumn(benchmark::State& state) {
    const auto spec = conc::mixing::MarkovChainSpec::two_state(0.3, 0.3);
    const auto layout = conc::coupling::block_layout(2000, 45);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(conc::coupling::sample_coupled_blocks(spec, layout, 7, ++seed));
}
BENCHMARK(BM_CoupledColumn);

}  // namespace
