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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "networks.hpp"
#include "oracle.hpp"
#include "peergroup/error.hpp"
#include "peergroup/instance_gen.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup {
namespace {

using testnet::N;
using testnet::S;
using testnet::U;
using testnet::W;

LnsConfig lns_config(std::uint64_t seed, int restarts = 10) {
  LnsConfig config;
  config.seed = seed;
  config.restarts = restarts;
  return config;
}

std::multiset<int> group_sizes(const Partition& p) {
  std::multiset<int> sizes;
  for (const auto& g : p.groups()) sizes.insert(static_cast<int>(g.size()));
  return sizes;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kBadInput;
}

void expect_constraints_hold(const Partition& p, const SolveConstraints& c) {
  for (const auto& [id, g] : c.pinned) EXPECT_EQ(p.group_of(id), g) << id;
  for (const auto& pair : c.must_link) EXPECT_TRUE(p.same_group(pair.first, pair.second));
  for (const auto& pair : c.cannot_link) EXPECT_FALSE(p.same_group(pair.first, pair.second));
}

TEST(AlgorithmNameTest, RoundTrip) {
  for (auto a : {Algorithm::kExact, Algorithm::kLns, Algorithm::kLocalSearch, Algorithm::kRandom,
                 Algorithm::kNetwork, Algorithm::kEvenUsers}) {
    EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  }
  EXPECT_THROW(parse_algorithm("mip"), Error);
}

TEST(EvaluatePartitionTest, PairAndAllNonusers) {
  auto pair = testnet::make({{"u", U}, {"n", N}}, {});
  auto e = evaluate_partition(pair, testnet::groups({{"u", "n"}}), testnet::params(1, 2, false));
  EXPECT_DOUBLE_EQ(e.expected_nonusers, 0.8);
  EXPECT_DOUBLE_EQ(e.success, -0.25);
  EXPECT_TRUE(e.deviancy_warning());

  auto quiet = testnet::make({{"a", N}, {"b", N}, {"c", N}, {"d", N}}, {{"a", "b", S}});
  auto q = evaluate_partition(quiet, testnet::groups({{"a", "c"}, {"b", "d"}}),
                              testnet::params(2, 2));
  EXPECT_EQ(q.success, 0.0);
  EXPECT_FALSE(q.deviancy_warning());
}

TEST(SolveExactTest, SeparatesThePair) {
  auto pair = testnet::make({{"u", U}, {"n", N}}, {});
  auto r = solve_exact(pair, testnet::params(1, 2, false));
  EXPECT_EQ(r.partition, testnet::groups({{"n"}, {"u"}}));
  EXPECT_DOUBLE_EQ(r.evaluation.expected_nonusers, 1.0);
  EXPECT_EQ(r.algorithm, Algorithm::kExact);
}

TEST(SolveExactTest, FlatObjectiveReturnsLexicographicPairing) {
  auto clique = testnet::make({{"a", N}, {"b", N}, {"c", N}, {"d", N}},
                              {{"a", "b", W}, {"a", "c", W}, {"a", "d", W}, {"b", "c", W},
                               {"b", "d", W}, {"c", "d", W}});
  auto r = solve_exact(clique, testnet::params(2, 2));
  EXPECT_DOUBLE_EQ(r.evaluation.expected_nonusers, 4.0);
  EXPECT_EQ(r.partition, testnet::groups({{"a", "b"}, {"c", "d"}}));
}

TEST(SolveExactTest, PrefersFewerGroupsOnTies) {
  auto quiet = testnet::make({{"a", N}, {"b", N}, {"c", N}, {"d", N}}, {});
  auto r = solve_exact(quiet, testnet::params(1, 4));
  EXPECT_EQ(r.partition.group_count(), 1);
}

class ExactOracleTest : public ::testing::TestWithParam<int> {};

TEST_P(ExactOracleTest, MatchesBruteForce) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  const auto net = generate_instance(6, seed, 0.5, 2, 0.5);
  for (const auto& params : {testnet::params(1, 3), testnet::params(2, 4, false),
                             testnet::params(3, 8)}) {
    const auto r = solve_exact(net, params);
    const auto bf = oracle::brute_force(net, params);
    EXPECT_NEAR(r.evaluation.expected_nonusers, bf.best, 1e-9);
    EXPECT_TRUE(validate_partition(net, r.partition, params.capacity).empty());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ExactOracleTest, ::testing::Range(1, 21));

TEST(SolveExactTest, Errors) {
  const auto big = generate_instance(13, 1);
  EXPECT_EQ(code_of([&] { solve_exact(big, {}); }), ErrorCode::kInstanceTooLarge);
  ExactConfig wide;
  wide.node_limit = 13;
  EXPECT_NO_THROW(solve_exact(big, {}, {}, wide));

  const auto small = generate_instance(5, 1, 0.68, 2, 0.0);
  EXPECT_EQ(code_of([&] { solve_exact(small, testnet::params(6, 8)); }),
            ErrorCode::kInfeasibleBounds);

  SolveConstraints clash;
  clash.must_link.insert({"v0", "v1"});
  clash.cannot_link.insert({"v0", "v1"});
  EXPECT_EQ(code_of([&] { solve_exact(small, testnet::params(1, 5), clash); }),
            ErrorCode::kUnsatisfiableConstraints);
}

TEST(SolveExactTest, HonorsConstraints) {
  const auto net = generate_instance(9, 4);
  const auto params = testnet::params(3, 5);
  SolveConstraints c;
  c.pinned["v0"] = 1;
  c.must_link.insert({"v2", "v3"});
  c.cannot_link.insert({"v4", "v5"});
  const auto r = solve_exact(net, params, c);
  expect_constraints_hold(r.partition, c);
  EXPECT_LE(r.evaluation.expected_nonusers,
            solve_exact(net, params).evaluation.expected_nonusers + 1e-12);
}

TEST(SolveLnsTest, CloseToExactOnSmallInstances) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto net = generate_instance(11, seed);
    const auto params = testnet::params(3, 5);
    const double exact = solve_exact(net, params).evaluation.expected_nonusers;
    const auto lns = solve_lns(net, params, lns_config(seed, 50));
    EXPECT_GE(lns.evaluation.expected_nonusers, 0.98 * exact) << seed;
    EXPECT_LE(lns.evaluation.expected_nonusers, exact + 1e-9) << seed;
  }
}

TEST(SolveLnsTest, SingleGroupInstance) {
  const auto net = generate_instance(5, 2, 0.5, 2, 0.0);
  const auto r = solve_lns(net, testnet::params(3, 8), lns_config(1, 3));
  EXPECT_EQ(r.partition.group_count(), 1);
  EXPECT_EQ(r.partition.size(), 5u);
}

TEST(SolveLnsTest, TraceImprovesStrictlyWithinRestart) {
  const auto net = generate_instance(30, 3);
  const auto r = solve_lns(net, {}, lns_config(3, 8));
  EXPECT_EQ(r.restarts_completed, 8);
  EXPECT_EQ(r.restart_seconds.size(), 8u);
  ASSERT_FALSE(r.improvement_trace.empty());
  double best = -1.0;
  for (std::size_t t = 0; t < r.improvement_trace.size(); ++t) {
    const auto& point = r.improvement_trace[t];
    if (t > 0 && point.restart == r.improvement_trace[t - 1].restart) {
      EXPECT_GT(point.objective, r.improvement_trace[t - 1].objective);
      EXPECT_GT(point.step, r.improvement_trace[t - 1].step);
    }
    best = std::max(best, point.objective);
  }
  EXPECT_NEAR(best, r.evaluation.expected_nonusers, 1e-9);
  EXPECT_TRUE(validate_partition(net, r.partition, ModelParams{}.capacity).empty());
}

TEST(SolveLnsTest, DeterministicAndIndependentOfWorkers) {
  const auto net = generate_instance(30, 5);
  auto config = lns_config(42, 6);
  const auto a = solve_lns(net, {}, config);
  const auto b = solve_lns(net, {}, config);
  config.workers = 3;
  const auto c = solve_lns(net, {}, config);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.partition, c.partition);
  ASSERT_EQ(a.improvement_trace.size(), c.improvement_trace.size());
  for (std::size_t t = 0; t < a.improvement_trace.size(); ++t) {
    EXPECT_EQ(a.improvement_trace[t].objective, c.improvement_trace[t].objective);
  }
  EXPECT_EQ(a.seed, 42u);
}

TEST(SolveLnsTest, Errors) {
  const auto net = generate_instance(10, 1);
  auto config = lns_config(1);
  config.time_limit = std::chrono::duration<double>(0.0);
  EXPECT_EQ(code_of([&] { solve_lns(net, {}, config); }), ErrorCode::kTimeBudgetZero);
  EXPECT_EQ(code_of([&] { solve_lns(net, testnet::params(6, 7), lns_config(1)); }),
            ErrorCode::kInfeasibleBounds);
  SolveConstraints clash;
  clash.pinned["v0"] = 0;
  clash.pinned["v1"] = 1;
  clash.must_link.insert({"v0", "v1"});
  EXPECT_EQ(code_of([&] { solve_lns(net, {}, lns_config(1), clash); }),
            ErrorCode::kUnsatisfiableConstraints);
}

TEST(SolveLnsTest, StopTokenCancels) {
  const auto net = generate_instance(30, 1);
  std::stop_source source;
  source.request_stop();
  auto config = lns_config(1);
  config.stop = source.get_token();
  EXPECT_EQ(code_of([&] { solve_lns(net, {}, config); }), ErrorCode::kCancelled);
}

TEST(SolveLnsTest, HonorsSideConstraints) {
  const auto net = generate_instance(24, 8);
  SolveConstraints c;
  c.pinned["v03"] = 0;
  c.pinned["v04"] = 0;
  c.pinned["v10"] = 2;
  c.must_link.insert({"v11", "v12"});
  c.cannot_link.insert({"v13", "v14"});
  c.cannot_link.insert({"v03", "v20"});
  for (auto solve : {solve_lns, solve_local_search}) {
    const auto r = solve(net, {}, lns_config(5, 5), c);
    expect_constraints_hold(r.partition, c);
    EXPECT_TRUE(validate_partition(net, r.partition, ModelParams{}.capacity).empty());
  }
}

TEST(SolveLnsTest, FrozenGroupKeepsExactlyItsPins) {
  const auto net = generate_instance(20, 8);
  SolveConstraints c;
  for (auto id : {"v00", "v05", "v09"}) c.pinned[id] = 1;
  c.frozen_groups.insert(1);
  const auto r = solve_lns(net, {}, lns_config(2, 5), c);
  std::vector<NodeId> members;
  for (const auto& [id, g] : r.partition.assignment()) {
    if (g == 1) members.push_back(id);
  }
  EXPECT_EQ(members, (std::vector<NodeId>{"v00", "v05", "v09"}));
}

TEST(SolveLocalSearchTest, FlatObjectiveStopsAtStall) {
  SocialNetwork quiet;
  for (int i = 0; i < 9; ++i) quiet.nodes.push_back({"n" + std::to_string(i), N});
  auto config = lns_config(1, 2);
  config.stall_limit = 20;
  const auto r = solve_local_search(quiet, {}, config);
  EXPECT_DOUBLE_EQ(r.evaluation.expected_nonusers, 9.0);
  EXPECT_EQ(r.restarts_completed, 2);
  for (const auto& point : r.improvement_trace) EXPECT_EQ(point.step, 0);
}

TEST(SolveLocalSearchTest, DeterministicAndFeasible) {
  const auto net = generate_instance(30, 9);
  const auto a = solve_local_search(net, {}, lns_config(4, 5));
  const auto b = solve_local_search(net, {}, lns_config(4, 5));
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.algorithm, Algorithm::kLocalSearch);
  EXPECT_TRUE(validate_partition(net, a.partition, ModelParams{}.capacity).empty());
}

TEST(RepairTest, CountsCandidateSplits) {
  const auto six = generate_instance(6, 3, 0.5, 2, 0.5);
  RepairStats stats;
  repair_two_groups(six, testnet::params(3, 3), testnet::groups({{"v0", "v1", "v2"},
                                                                 {"v3", "v4", "v5"}}),
                    0, 1, {}, &stats);
  EXPECT_EQ(stats.candidates, 10);
  EXPECT_EQ(stats.candidates, oracle::two_block_splits(6, 3, 3));

  const auto net = generate_instance(14, 3);
  Partition p;
  for (int i = 0; i < 14; ++i) p.assign(net.nodes[i].id, i < 7 ? 0 : 1);
  RepairStats big;
  repair_two_groups(net, testnet::params(3, 8), p, 0, 1, {}, &big);
  EXPECT_EQ(big.candidates, 4719);
  EXPECT_EQ(big.candidates, oracle::two_block_splits(14, 3, 8));
  EXPECT_EQ(big.feasible, big.candidates);
}

TEST(RepairTest, KeepsPinnedNodeInItsGroup) {
  const auto net = generate_instance(12, 6);
  const auto params = testnet::params(3, 8);
  Partition p;
  for (int i = 0; i < 12; ++i) p.assign(net.nodes[i].id, i % 3);
  for (const auto& [id, g] : p.assignment()) {
    if (g == 0) continue;
    SolveConstraints c;
    c.pinned[id] = 1;
    const auto out = repair_two_groups(net, params, p, 1, 2, c);
    EXPECT_EQ(out.group_of(id), 1) << id;
  }
}

TEST(RepairTest, ResultAdmitsNoImprovingSwap) {
  const auto net = generate_instance(30, 10);
  const ModelParams params;
  const auto start = baseline_random(net, params, 10);
  const auto out = repair_two_groups(net, params, start, 0, 1);
  const double value = evaluate_partition(net, out, params).expected_nonusers;
  EXPECT_GE(value, evaluate_partition(net, start, params).expected_nonusers - 1e-12);
  std::vector<NodeId> g0;
  std::vector<NodeId> g1;
  for (const auto& [id, g] : out.assignment()) {
    if (g == 0) g0.push_back(id);
    if (g == 1) g1.push_back(id);
  }
  for (const auto& a : g0) {
    for (const auto& b : g1) {
      Partition swapped = out;
      swapped.assign(a, 1);
      swapped.assign(b, 0);
      EXPECT_LE(evaluate_partition(net, swapped, params).expected_nonusers, value + 1e-9);
    }
  }
  // Other groups are untouched.
  for (const auto& [id, g] : start.assignment()) {
    if (g > 1) {
      EXPECT_EQ(out.group_of(id), g);
    }
  }
}

TEST(RepairTest, Errors) {
  const auto net = generate_instance(12, 6);
  Partition p;
  for (int i = 0; i < 12; ++i) p.assign(net.nodes[i].id, i % 3);
  SolveConstraints c;
  c.pinned["v00"] = 0;
  c.pinned["v03"] = 1;
  c.must_link.insert({"v00", "v03"});
  EXPECT_EQ(code_of([&] { repair_two_groups(net, {}, p, 0, 1, c); }),
            ErrorCode::kUnsatisfiableConstraints);
  EXPECT_EQ(code_of([&] { repair_two_groups(net, {}, p, 1, 1); }), ErrorCode::kBadInput);
}

TEST(BaselineRandomTest, EqualSplitOfMinimumGroupCount) {
  const auto net = generate_instance(30, 1);
  EXPECT_EQ(group_sizes(baseline_random(net, {}, 1)), (std::multiset<int>{7, 7, 8, 8}));
  const auto six = generate_instance(6, 1, 0.5, 2, 0.0);
  EXPECT_EQ(group_sizes(baseline_random(six, testnet::params(3, 3), 1)),
            (std::multiset<int>{3, 3}));
  EXPECT_EQ(baseline_random(net, {}, 5), baseline_random(net, {}, 5));
  EXPECT_NE(baseline_random(net, {}, 5), baseline_random(net, {}, 6));
}

TEST(BaselineNetworkTest, RecoversCliques) {
  auto net = testnet::make({{"a", U}, {"b", N}, {"c", U}, {"d", N}, {"e", U}, {"f", N}},
                           {{"a", "c", W}, {"c", "e", S}, {"e", "a", W}, {"b", "d", S},
                            {"d", "f", W}, {"f", "b", W}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = baseline_network(net, testnet::params(3, 3), seed);
    EXPECT_TRUE(p.same_group("a", "c") && p.same_group("a", "e")) << seed;
    EXPECT_TRUE(p.same_group("b", "d") && p.same_group("b", "f")) << seed;
  }
}

TEST(BaselineNetworkTest, StarHubKeepsTwoSpokes) {
  auto net = testnet::make({{"h", U}, {"s1", N}, {"s2", N}, {"s3", U}, {"s4", N}, {"z", N}},
                           {{"s1", "h", W}, {"s2", "h", W}, {"s3", "h", S}, {"h", "s4", W}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = baseline_network(net, testnet::params(3, 3), seed);
    int spokes = 0;
    for (auto s : {"s1", "s2", "s3", "s4"}) spokes += p.same_group("h", s) ? 1 : 0;
    EXPECT_EQ(spokes, 2) << seed;
    EXPECT_FALSE(p.same_group("h", "z")) << seed;
  }
}

TEST(BaselineNetworkTest, EdgelessIsSeededFill) {
  SocialNetwork net;
  for (int i = 0; i < 10; ++i) net.nodes.push_back({"n" + std::to_string(i), i % 2 ? U : N});
  const auto params = testnet::params(3, 4);
  const auto p = baseline_network(net, params, 3);
  EXPECT_EQ(p, baseline_network(net, params, 3));
  EXPECT_TRUE(validate_partition(net, p, params.capacity).empty());
  EXPECT_EQ(p.group_count(), 3);
}

TEST(BaselineNetworkTest, FeasibleOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto net = generate_instance(20 + static_cast<int>(seed), seed);
    const auto p = baseline_network(net, {}, seed);
    EXPECT_TRUE(validate_partition(net, p, ModelParams{}.capacity).empty()) << seed;
  }
}

int users_in(const SocialNetwork& net, const std::vector<NodeId>& members) {
  int count = 0;
  for (const auto& id : members) {
    for (const auto& node : net.nodes) {
      if (node.id == id && node.behavior == Behavior::kUser) ++count;
    }
  }
  return count;
}

SocialNetwork mixed(int users, int nonusers) {
  SocialNetwork net;
  for (int i = 0; i < users; ++i) net.nodes.push_back({"u" + std::to_string(i), U});
  for (int i = 0; i < nonusers; ++i) net.nodes.push_back({"n" + std::to_string(i), N});
  return net;
}

TEST(BaselineEvenUsersTest, SpreadsUsers) {
  const auto params = testnet::params(3, 4);
  const auto net = mixed(8, 8);
  const auto p = baseline_even_users(net, params, 2);
  ASSERT_EQ(p.group_count(), 4);
  for (const auto& g : p.groups()) EXPECT_EQ(users_in(net, g), 2);

  const auto five = mixed(5, 11);
  std::multiset<int> counts;
  for (const auto& g : baseline_even_users(five, params, 2).groups()) {
    counts.insert(users_in(five, g));
  }
  EXPECT_EQ(counts, (std::multiset<int>{1, 1, 1, 2}));

  const auto none = mixed(0, 16);
  EXPECT_EQ(group_sizes(baseline_even_users(none, params, 2)), (std::multiset<int>{4, 4, 4, 4}));
}

TEST(SolveBaselineTest, WrapsEvaluation) {
  const auto net = generate_instance(20, 2);
  const auto r = solve_baseline(net, {}, Algorithm::kRandom, 7);
  EXPECT_EQ(r.partition, baseline_random(net, {}, 7));
  EXPECT_DOUBLE_EQ(r.evaluation.expected_nonusers,
                   evaluate_partition(net, r.partition, {}).expected_nonusers);
  EXPECT_EQ(code_of([&] { solve_baseline(net, {}, Algorithm::kLns, 7); }), ErrorCode::kBadInput);
}

}  // namespace
}  // namespace peergroup
