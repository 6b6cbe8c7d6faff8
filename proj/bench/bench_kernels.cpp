// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "adnoma/optimizer.hpp"
#include "adnoma/sim.hpp"

namespace {

adnoma::ModelParams cell(int relays, int levels) {
  adnoma::ModelParams m;
  m.users = 30;
  m.relays = relays;
  m.eps_u = 0.3;
  m.p = 2.0 / 30;
  m.delta = 38;
  return adnoma::with_levels(m, levels);
}

void BM_GridParallel(benchmark::State& state) {
  const auto m = cell(4, 8);
  const auto grid = adnoma::GridSpec::standard(30, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(adnoma::evaluate_grid(m, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_GridSerial(benchmark::State& state) {
  const auto m = cell(4, 8);
  const auto grid = adnoma::GridSpec::standard(30, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(adnoma::evaluate_grid_serial(m, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

adnoma::SimConfig campaign(std::int64_t horizon) {
  adnoma::SimConfig c;
  c.params = cell(2, 2);
  c.horizon = horizon;
  c.warmup = 1000;
  for (std::uint64_t s = 1; s <= 8; ++s) c.seeds.push_back(s);
  return c;
}

void BM_CampaignParallel(benchmark::State& state) {
  const auto c = campaign(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(adnoma::run_campaign(c));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 8);
}

void BM_CampaignSerial(benchmark::State& state) {
  const auto c = campaign(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(adnoma::run_campaign_serial(c));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 8);
}

}  // namespace

BENCHMARK(BM_GridParallel)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSerial)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CampaignParallel)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CampaignSerial)->Arg(100'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
