#include <benchmark/benchmark.h>

#include "tpcc/harness.hpp"
#include "tpcc/keys.hpp"
#include "tpcc/profiles.hpp"

namespace {

using namespace tpcc;

void BM_KeyEncode(benchmark::State& state) {
  std::int64_t o = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(keys::order_line(3, 7, o % 3000, o % 15));
    ++o;
  }
}
BENCHMARK(BM_KeyEncode);

void BM_PopulationGeneration(benchmark::State& state) {
  const NurandConstants constants = NurandConstants::derive(1);
  for (auto _ : state) {
    std::int64_t n = 0;
    generate_initial_population(
        1, 1, constants, [&n](EntityType, const std::string&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_PopulationGeneration)->Unit(benchmark::kSecond);

const WorldState& small_world() {
  static const WorldState world = [] {
    return load_world_direct(1, 1, NurandConstants::derive(1));
  }();
  return world;
}

void BM_NewOrderEndorsement(benchmark::State& state) {
  const WorldState& world = small_world();
  Rng rng(42);
  const NurandConstants constants = NurandConstants::derive(1);
  for (auto _ : state) {
    ProfileInput input = generate_profile_input(Profile::NewOrder, 1, 1, 1,
                                                constants, rng);
    input.args.push_back("1");
    input.args.push_back("bench");
    EndorsementContext ctx(world);
    try {
      benchmark::DoNotOptimize(do_new_order(ctx, input.args));
    } catch (const BusinessRollback&) {
      // the deliberate 1% invalid item id
    }
  }
}
BENCHMARK(BM_NewOrderEndorsement);

void BM_StateHash(benchmark::State& state) {
  const WorldState& world = small_world();
  for (auto _ : state) benchmark::DoNotOptimize(world.state_hash());
}
BENCHMARK(BM_StateHash)->Unit(benchmark::kMillisecond);

void BM_VirtualRound(benchmark::State& state) {
  const WorldState& world = small_world();
  for (auto _ : state) {
    ExecutionConfig cfg;
    cfg.terminal_count = static_cast<int>(state.range(0));
    cfg.duration = seconds_to_time(60);
    cfg.timing = paper_calibrated_preset();
    cfg.constants = NurandConstants::derive(1);
    LedgerConfig ledger;
    ledger.latency.kind = LatencyConfig::Kind::LoadExponential;
    benchmark::DoNotOptimize(run_execution(world.fork(), cfg, ledger));
  }
}
BENCHMARK(BM_VirtualRound)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
