#include <benchmark/benchmark.h>

#include "erw/exact.hpp"
#include "erw/limit_process.hpp"
#include "erw/rng.hpp"
#include "erw/walks.hpp"

namespace {

void BM_PhiloxBlock(benchmark::State& state) {
  erw::Philox4x32::Counter counter{0, 0, 0, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(erw::Philox4x32::generate(counter, {1, 2}));
    ++counter[0];
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxBlock);

void BM_Uniform(benchmark::State& state) {
  erw::UniformStream stream({1, 0, erw::Purpose::WalkDriver});
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_uniform());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Uniform);

void BM_Normal(benchmark::State& state) {
  erw::UniformStream stream({1, 0, erw::Purpose::LimitProcess});
  for (auto _ : state) benchmark::DoNotOptimize(stream.next_normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Normal);

void BM_ErwEscape(benchmark::State& state) {
  const auto barrier = state.range(0);
  std::uint64_t replicate = 0;
  std::int64_t steps = 0;
  for (auto _ : state) {
    erw::UniformStream stream({3, replicate++, erw::Purpose::WalkDriver});
    const auto tau = erw::abs_erw_escape_time(0.3, barrier, 10000 * barrier * barrier, stream);
    steps += tau.value_or(0);
  }
  state.SetItemsProcessed(steps);  // walk steps per second
}
BENCHMARK(BM_ErwEscape)->Arg(10)->Arg(40);

void BM_DpAdvance(benchmark::State& state) {
  auto dp = erw::AbsorbingDPState::initial(state.range(0), 0.7);
  for (auto _ : state) {
    dp.advance();
    benchmark::DoNotOptimize(dp.absorbed());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DpAdvance)->Arg(10)->Arg(100)->Arg(1000);

void BM_ExactExpectation(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(erw::exact_expected_escape(state.range(0), 0.25).expectation);
}
BENCHMARK(BM_ExactExpectation)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_LimitHittingTime(benchmark::State& state) {
  const auto grid = erw::build_covariance(0.25, 20.0, 1e-3);
  std::uint64_t replicate = 0;
  std::int64_t points = 0;
  for (auto _ : state) {
    erw::UniformStream stream({5, replicate++, erw::Purpose::LimitProcess});
    const auto sample = erw::sample_hitting_time(grid, stream, false);
    points += static_cast<std::int64_t>(sample.nu_index.value_or(grid.size()));
  }
  state.SetItemsProcessed(points);  // grid points per second
}
BENCHMARK(BM_LimitHittingTime);

void BM_BuildGrid(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(erw::build_covariance(0.7, 20.0, 1e-3).size());
}
BENCHMARK(BM_BuildGrid)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
