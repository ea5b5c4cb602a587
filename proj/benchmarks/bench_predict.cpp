#include <benchmark/benchmark.h>

#include "statepredict/predictor.hpp"
#include "statepredict/resources.hpp"
#include "statepredict/scenario.hpp"
#include "statepredict/worldstore.hpp"

namespace sp = statepredict;

namespace {

sp::WorldStore synthetic_store(std::size_t n) {
  sp::WorldStore store;
  for (std::size_t i = 0; i < n; ++i) {
    sp::WorldState ws;
    ws.state = sp::StateId::parse("root/S" + std::to_string(i % 16));
    ws.state_params.set("index", static_cast<std::int64_t>(i));
    store.intern(ws);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    auto to = [&](std::size_t j) { return sp::WorldStateId{static_cast<std::uint32_t>(j % n)}; };
    store.record_transition(sp::WorldStateId{i}, to(i + 1));
    store.record_transition(sp::WorldStateId{i}, to(i * 7 + 1));
  }
  return store;
}

void BM_BuildMatrix(benchmark::State& state) {
  sp::WorldStore store = synthetic_store(static_cast<std::size_t>(state.range(0)));
  sp::StoreSnapshot snap = store.snapshot();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::build_matrix(snap));
  }
}
BENCHMARK(BM_BuildMatrix)->Arg(100)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_PredictHorizon3(benchmark::State& state) {
  sp::WorldStore store = synthetic_store(static_cast<std::size_t>(state.range(0)));
  sp::StoreSnapshot snap = store.snapshot();
  sp::TransitionMatrix m = sp::build_matrix(snap);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::predict(sp::WorldStateId{0}, 3, m));
  }
}
BENCHMARK(BM_PredictHorizon3)->Arg(100)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TriggerPath(benchmark::State& state) {
  // The full prediction-trigger path: snapshot, rebuild, predict, envelope.
  sp::WorldStore store = synthetic_store(static_cast<std::size_t>(state.range(0)));
  sp::ProfileTable table = sp::default_profile_table();
  for (auto _ : state) {
    sp::StoreSnapshot snap = store.snapshot();
    sp::TransitionMatrix m = sp::build_matrix(snap);
    auto steps = sp::predict(sp::WorldStateId{0}, 3, m);
    benchmark::DoNotOptimize(sp::envelope(steps, snap, table, 0.75));
  }
}
BENCHMARK(BM_TriggerPath)->Arg(100)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_TrainEpisode(benchmark::State& state) {
  sp::ScenarioConfig cfg = sp::default_config();
  sp::WorldStore store;
  sp::Rng rng(1);
  std::uint64_t episode = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::run_episode(cfg, store, rng, false, nullptr, episode++));
  }
}
BENCHMARK(BM_TrainEpisode)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
