#include <benchmark/benchmark.h>

#include <nlohmann/json.hpp>

#include "conc/erm.hpp"
#include "conc/harness.hpp"

namespace {

conc::erm::DataGenerator default_generator() {
    return conc::harness::parse_config(nlohmann::json{{"experiment", "erm-oracle"}, {"T_grid", {256}}})
        .erm.generator;
}

void BM_TrainErm(benchmark::State& state) {
    const auto gen = default_generator();
    const auto data = gen.generate(static_cast<std::size_t>(state.range(0)), 4);
    conc::erm::TrainConfig cfg;
    cfg.restarts = 3;
    cfg.steps = 300;
    cfg.step0 = 0.4;
    for (auto _ : state) benchmark::DoNotOptimize(conc::erm::train_erm(gen.spec, data, cfg));
}
BENCHMARK(BM_TrainErm)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_PopulationRisk(benchmark::State& state) {
    const auto gen = default_generator();
    const auto sample = gen.stationary_sample(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(conc::erm::risk_on_sample(gen.spec, gen.teacher, sample));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PopulationRisk)->Arg(100000);

}  // namespace
