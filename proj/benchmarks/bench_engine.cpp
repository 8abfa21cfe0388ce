#include <benchmark/benchmark.h>

#include "spotsim/engine.hpp"
#include "spotsim/failure.hpp"
#include "spotsim/framework.hpp"
#include "spotsim/trace.hpp"

namespace {

using namespace spotsim;

PriceTrace walk_trace(Seconds days) {
  return gen_trace(RandomWalkModel{Money::parse("0.40"), Money::parse("0.004"), 1800, Money::parse("0.30"),
                                   1'317'427'200, days * 24 * kHour},
                   7);
}

void BM_Simulate(benchmark::State& state) {
  const PriceTrace trace = walk_trace(30);
  const auto scheme = static_cast<SchemeId>(state.range(0));
  const JobSpec job{500 * 60, 300, 300, 5};
  const BidConfig cfg{Money::parse("0.41"), default_provider_bid(trace), scheme};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(trace, job, cfg));
  state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_Simulate)->DenseRange(0, 5);

void BM_SimulateOracle(benchmark::State& state) {
  const PriceTrace trace = walk_trace(3);
  const JobSpec job{500 * 60, 300, 300, 5};
  const BidConfig cfg{Money::parse("0.41"), default_provider_bid(trace), SchemeId::acc};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_oracle(trace, job, cfg));
}
BENCHMARK(BM_SimulateOracle);

void BM_Availability(benchmark::State& state) {
  const PriceTrace trace = walk_trace(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(availability(trace, Money::parse("0.41")));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.points().size()));
}
BENCHMARK(BM_Availability)->Arg(30)->Arg(365);

void BM_EstimatePdfAndEet(benchmark::State& state) {
  const PriceTrace trace = walk_trace(365);
  for (auto _ : state) {
    const FailurePdf pdf = estimate_pdf(trace, Money::parse("0.41"), 60);
    benchmark::DoNotOptimize(eet(pdf, {500 * 60, 300}));
  }
}
BENCHMARK(BM_EstimatePdfAndEet);

}  // namespace

BENCHMARK_MAIN();
