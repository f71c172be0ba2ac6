#include <benchmark/benchmark.h>

#include <vector>

#include "rankdyn/analytic.hpp"
#include "rankdyn/model.hpp"
#include "rankdyn/ranking.hpp"
#include "rankdyn/simulation.hpp"

namespace {

using namespace rankdyn;

void BM_AgentDraw(benchmark::State& state) {
    const ModelConfig cfg;
    const AgentSource agents(cfg, 1);
    std::uint64_t n = 0;
    for (auto _ : state) benchmark::DoNotOptimize(agents(n++));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AgentDraw);

void BM_RecordOutcome(benchmark::State& state) {
    ModelConfig cfg;
    cfg.eta = 10.0;
    cfg.lambda = state.range(0) == 0 ? 1.0 : 0.5;
    CounterStream init(1, StreamPurpose::Ranking, 0);
    RankingState ranking = RankingState::init(cfg, init);
    CounterStream stream(1, StreamPurpose::Ranking, 1);
    CounterStream choices(1, StreamPurpose::Replicate, 0);
    for (auto _ : state) {
        const Group g = choices.below(2) == 0 ? Group::L : Group::R;
        ranking.record_outcome(g, static_cast<int>(choices.below(cfg.M)), choices.below(8) == 0, stream);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RecordOutcome)->Arg(0)->Arg(1)->ArgName("personalized");

void BM_SingleRun(benchmark::State& state) {
    ModelConfig cfg;
    cfg.eta = 100.0;
    cfg.lambda = state.range(0) == 0 ? 1.0 : 0.5;
    std::uint64_t t = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_once(cfg, derive_run_seed(cfg.master_seed, t++)));
    state.SetItemsProcessed(state.iterations() * cfg.N);
}
BENCHMARK(BM_SingleRun)->Arg(0)->Arg(1)->ArgName("personalized")->Unit(benchmark::kMillisecond);

void BM_Ensemble(benchmark::State& state) {
    ModelConfig cfg;
    cfg.eta = 100.0;
    cfg.T = 16;
    EnsembleOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(cfg, opts));
    state.SetItemsProcessed(state.iterations() * cfg.T * cfg.N);
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(4)->ArgName("threads")->Unit(benchmark::kMillisecond);

void BM_AnalyticIndices(benchmark::State& state) {
    ModelConfig cfg;
    cfg.eta = 10.0;
    cfg.lambda = 0.5;
    const AnalyticModel model(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(model.indices());
}
BENCHMARK(BM_AnalyticIndices)->Unit(benchmark::kMillisecond);

void BM_AnalyticSetup(benchmark::State& state) {
    ModelConfig cfg;
    cfg.eta = 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(AnalyticModel(cfg));
}
BENCHMARK(BM_AnalyticSetup)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
