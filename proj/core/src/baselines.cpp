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

// Practitioner baselines. All of them use the smallest feasible group count.

#include <algorithm>
#include <numeric>

#include "peergroup/dynamics.hpp"
#include "peergroup/error.hpp"
#include "peergroup/random.hpp"
#include "peergroup/solvers.hpp"
#include "solver_common.hpp"

namespace peergroup {
namespace {

int min_group_count(int n, const CapacityBounds& bounds) {
  internal::require_feasible(n, bounds);
  return feasible_group_counts(n, bounds).front();
}

std::vector<int> seeded_order(int n, std::uint64_t seed) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

double pre_tie_weight(PreTie tie, const ModelParams& params) {
  switch (tie) {
    case PreTie::kStrong: return params.weight_strong;
    case PreTie::kWeak: return params.weight_weak;
    case PreTie::kNone: return 0.0;
  }
  return 0.0;
}

}  // namespace

Partition baseline_random(const SocialNetwork& net, const ModelParams& params,
                          std::uint64_t seed) {
  validate_params(params);
  const IndexedNetwork indexed(net);
  const int n = indexed.size();
  const int groups = min_group_count(n, params.capacity);
  const std::vector<int> order = seeded_order(n, seed);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  int cursor = 0;
  for (int g = 0; g < groups; ++g) {
    const int size = n / groups + (g < n % groups ? 1 : 0);
    for (int t = 0; t < size; ++t) labels[order[cursor++]] = g;
  }
  return indexed.to_partition(canonical_labels(labels));
}

// Greedy nomination clustering: groups are filled one after another, each
// admitting the unassigned node most attached (pre-tie weight, both
// directions) to its current members. A final pass moves weakly attached
// nodes into groups that ended below the lower bound.
Partition baseline_network(const SocialNetwork& net, const ModelParams& params,
                           std::uint64_t seed) {
  validate_params(params);
  const IndexedNetwork indexed(net);
  const int n = indexed.size();
  const CapacityBounds bounds = params.capacity;
  const int groups = min_group_count(n, bounds);
  const std::vector<int> order = seeded_order(n, seed);

  std::vector<double> attach(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      attach[static_cast<std::size_t>(i) * n + j] =
          pre_tie_weight(indexed.pre_tie(i, j), params) +
          pre_tie_weight(indexed.pre_tie(j, i), params);
    }
  }
  auto tie = [&](int i, int j) { return attach[static_cast<std::size_t>(i) * n + j]; };

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(groups));
  int left = n;
  for (int g = 0; g < groups && left > 0; ++g) {
    // Seed: first unassigned node (seeded order) that still has ties to other
    // unassigned nodes, else the first unassigned node.
    int seed_node = -1;
    for (int i : order) {
      if (labels[i] >= 0) continue;
      if (seed_node < 0) seed_node = i;
      bool connected = false;
      for (int j = 0; j < n && !connected; ++j) {
        connected = labels[j] < 0 && j != i && tie(i, j) > 0.0;
      }
      if (connected) {
        seed_node = i;
        break;
      }
    }
    labels[seed_node] = g;
    members[g].push_back(seed_node);
    --left;
    while (static_cast<int>(members[g].size()) < bounds.hi && left > 0) {
      int pick = -1;
      double best = -1.0;
      for (int i : order) {
        if (labels[i] >= 0) continue;
        double score = 0.0;
        for (int m : members[g]) score += tie(i, m);
        if (score > best) {
          best = score;
          pick = i;
        }
      }
      labels[pick] = g;
      members[g].push_back(pick);
      --left;
    }
  }

  auto own_attachment = [&](int i) {
    double score = 0.0;
    for (int m : members[labels[i]]) score += tie(i, m);
    return score;
  };
  for (int g = 0; g < groups; ++g) {
    while (static_cast<int>(members[g].size()) < bounds.lo) {
      int pick = -1;
      double lowest = 0.0;
      for (int i : order) {
        if (labels[i] == g || static_cast<int>(members[labels[i]].size()) <= bounds.lo) {
          continue;
        }
        const double score = own_attachment(i);
        if (pick < 0 || score < lowest) {
          pick = i;
          lowest = score;
        }
      }
      auto& from = members[labels[pick]];
      from.erase(std::find(from.begin(), from.end(), pick));
      labels[pick] = g;
      members[g].push_back(pick);
    }
  }
  return indexed.to_partition(canonical_labels(labels));
}

Partition baseline_even_users(const SocialNetwork& net, const ModelParams& params,
                              std::uint64_t seed) {
  validate_params(params);
  const IndexedNetwork indexed(net);
  const int n = indexed.size();
  const int groups = min_group_count(n, params.capacity);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> sizes(static_cast<std::size_t>(groups), 0);
  int dealt = 0;
  const std::vector<int> order = seeded_order(n, seed);
  for (int i : order) {
    if (!indexed.is_user(i)) continue;
    labels[i] = dealt++ % groups;
    ++sizes[labels[i]];
  }
  for (int i : order) {
    if (indexed.is_user(i)) continue;
    const int g = static_cast<int>(std::min_element(sizes.begin(), sizes.end()) -
                                   sizes.begin());
    labels[i] = g;
    ++sizes[g];
  }
  return indexed.to_partition(canonical_labels(labels));
}

SolveResult solve_baseline(const SocialNetwork& net, const ModelParams& params,
                           Algorithm algorithm, std::uint64_t seed) {
  const auto start = internal::Clock::now();
  Partition partition;
  switch (algorithm) {
    case Algorithm::kRandom: partition = baseline_random(net, params, seed); break;
    case Algorithm::kNetwork: partition = baseline_network(net, params, seed); break;
    case Algorithm::kEvenUsers:
      partition = baseline_even_users(net, params, seed);
      break;
    default:
      throw Error(ErrorCode::kBadInput, "not a baseline algorithm");
  }
  SolveResult result;
  result.partition = partition;
  result.evaluation = evaluate_partition(net, partition, params);
  result.algorithm = algorithm;
  result.seed = seed;
  result.restarts_completed = 1;
  result.wall_time = internal::Clock::now() - start;
  result.improvement_trace.push_back(
      {0, 0, result.wall_time.count(), result.evaluation.expected_nonusers});
  return result;
}

}  // namespace peergroup
