// Copyright 2026 The peergroup Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "peergroup/dynamics.hpp"
#include "peergroup/influence.hpp"
#include "peergroup/instance_gen.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup {
namespace {

struct Fixture {
  explicit Fixture(int n)
      : net(generate_instance(n, 7)), partition(baseline_random(net, params, 7)) {}
  ModelParams params;
  SocialNetwork net;
  Partition partition;
};

void BM_ApplyIntervention(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const IndexedNetwork indexed(f.net);
  std::vector<int> labels(f.net.nodes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = *f.partition.group_of(f.net.nodes[i].id);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_intervention(indexed, labels, f.params));
  }
}
BENCHMARK(BM_ApplyIntervention)->Arg(30)->Arg(60)->Arg(120);

void BM_ExpectedNonusers(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const WeightedNetwork wnet = apply_intervention(f.net, f.partition, f.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_nonusers(wnet, f.params));
  }
}
BENCHMARK(BM_ExpectedNonusers)->Arg(30)->Arg(60)->Arg(120);

void BM_RepairTwoGroups(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(repair_two_groups(f.net, f.params, f.partition, 0, 1));
  }
}
BENCHMARK(BM_RepairTwoGroups)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_LnsRestart(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  LnsConfig config;
  config.restarts = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = ++seed;
    benchmark::DoNotOptimize(solve_lns(f.net, f.params, config));
  }
}
BENCHMARK(BM_LnsRestart)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const Fixture f(30);
  const WeightedNetwork wnet = apply_intervention(f.net, f.partition, f.params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(wnet, f.params, state.range(0), 3));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace peergroup

BENCHMARK_MAIN();
