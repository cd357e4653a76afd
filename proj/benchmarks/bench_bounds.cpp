#include <benchmark/benchmark.h>

#include <nlohmann/json.hpp>

#include "conc/bounds.hpp"
#include "conc/harness.hpp"

namespace {

void BM_TheoremBound(benchmark::State& state) {
    conc::bounds::BoundInputs in;
    in.T = 2000;
    in.n = 45;
    in.gamma2 = 1.0;
    in.gamma_alpha = 1.0;
    in.eps1 = 6.0;
    in.eps2 = 0.1;
    in.beta = conc::bounds::beta_from_chain(conc::mixing::MarkovChainSpec::two_state(0.3, 0.3));
    for (auto _ : state) benchmark::DoNotOptimize(conc::bounds::theorem_bound(in));
}
BENCHMARK(BM_TheoremBound);

void BM_CalibrateConcentration(benchmark::State& state) {
    const auto config = conc::harness::parse_config(nlohmann::json{
        {"experiment", "concentration"},
        {"T_grid", {2000}},
        {"chain", {{"two_state", {{"p", 0.3}, {"q", 0.3}}}}},
        {"concentration", {{"values", {0.0, 1.0}}, {"theta_points", state.range(0)}}}});
    for (auto _ : state) benchmark::DoNotOptimize(conc::harness::calibrate_concentration(config, 2000));
}
BENCHMARK(BM_CalibrateConcentration)->Arg(41)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace
