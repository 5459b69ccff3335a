// Apache License, Version 2.0, refer to LICENSE.txt
#include <benchmark/benchmark.h>

#include "puchain/puchain.hpp"

using namespace puchain;

namespace {

void BM_FastPartition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto model = erdos_renyi_ermgm(n, 2, ParameterMap::natural(1));
  const ParamVector theta{0.7};
  for (auto _ : state) benchmark::DoNotOptimize(fast_log_partition(model, theta));
}
BENCHMARK(BM_FastPartition)->Arg(4)->Arg(8)->Arg(32)->Arg(128);

void BM_BrutePartition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StateSpace space = StateSpace::multigraph(n, 2);
  std::vector<double> tau;
  for (StateIndex s = 0; s < space.size(); ++s) tau.push_back(space.decode(s).edge_count() / double(n - 1));
  const ExpFamilySpec fam(space, std::vector<double>(space.size(), 1.0), 1, tau, ParameterMap::natural(1));
  const ParamVector theta{0.7};
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_partition(fam, theta));
}
BENCHMARK(BM_BrutePartition)->Arg(3)->Arg(4)->Arg(5);

void BM_DetectPuniform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto P = stability_matrix(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(detect_puniform(P));
}
BENCHMARK(BM_DetectPuniform)->Arg(3)->Arg(4)->Arg(5);

void BM_IsoClasses(benchmark::State& state) {
  const StateSpace space = StateSpace::multigraph(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(iso_classes(space));
}
BENCHMARK(BM_IsoClasses)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_SampleChain(benchmark::State& state) {
  const auto P = density_matrix(4, 0.3);
  const auto T = static_cast<std::size_t>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_chain(P, 0, T, 7, rep++));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * T));
}
BENCHMARK(BM_SampleChain)->Arg(20000);

void BM_SampleMultigraph(benchmark::State& state) {
  const auto model = erdos_renyi_ermgm(static_cast<int>(state.range(0)), 3, ParameterMap::natural(1));
  const ParamVector theta{0.2};
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_multigraph(model, theta, 11, rep++));
}
BENCHMARK(BM_SampleMultigraph)->Arg(10)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
