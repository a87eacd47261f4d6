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

// Partitioning algorithms: exhaustive search for small rosters, large
// neighborhood search with exact two-group repair, swap hill climbing and the
// three practitioner baselines. Every algorithm reports through
// evaluate_partition so all numbers come from one evaluation path.

#ifndef PEERGROUP_SOLVERS_HPP_
#define PEERGROUP_SOLVERS_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <stop_token>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peergroup/influence.hpp"
#include "peergroup/model.hpp"

namespace peergroup {

// Unordered pair; construction normalizes to (min, max).
struct NodePair {
  NodeId first;
  NodeId second;

  NodePair() = default;
  NodePair(NodeId a, NodeId b);
  auto operator<=>(const NodePair&) const = default;
};

// Side constraints for constraint-aware re-solving. A frozen group consists
// of exactly the nodes pinned to it (directly or through must-links); no
// other node may join it.
struct SolveConstraints {
  std::map<NodeId, int> pinned;
  std::set<NodePair> must_link;
  std::set<NodePair> cannot_link;
  std::set<int> frozen_groups;

  bool empty() const {
    return pinned.empty() && must_link.empty() && cannot_link.empty() &&
           frozen_groups.empty();
  }
  bool operator==(const SolveConstraints&) const = default;
};

enum class Algorithm { kExact, kLns, kLocalSearch, kRandom, kNetwork, kEvenUsers };

std::string_view algorithm_name(Algorithm algorithm);
// Accepts exact|lns|local|random|network|even; throws Error(kBadInput).
Algorithm parse_algorithm(std::string_view name);

struct LnsConfig {
  int restarts = 50;
  // Total budget; each restart gets time_limit / restarts.
  std::chrono::duration<double> time_limit{3600.0};
  int stall_limit = 200;
  std::uint64_t seed = 0;
  // Restarts are independent; the result does not depend on this.
  int workers = 1;
  std::stop_token stop;
};

struct ExactConfig {
  int node_limit = 12;
  std::stop_token stop;
};

struct TracePoint {
  int restart = 0;
  int step = 0;  // destroy/repair or swap iteration within the restart
  double elapsed_seconds = 0.0;
  double objective = 0.0;
};

struct SolveResult {
  Partition partition;
  Evaluation evaluation;
  Algorithm algorithm = Algorithm::kLns;
  std::uint64_t seed = 0;
  std::chrono::duration<double> wall_time{0.0};
  int restarts_completed = 0;
  std::vector<TracePoint> improvement_trace;
  std::vector<double> restart_seconds;
};

// Full pipeline: apply_intervention -> expected_nonusers -> success ->
// flip_profile. Throws Error(kInfeasiblePartition) on invalid partitions.
Evaluation evaluate_partition(const SocialNetwork& net, const Partition& partition,
                              const ModelParams& params);

// Throws kInstanceTooLarge, kInfeasibleBounds or kUnsatisfiableConstraints.
SolveResult solve_exact(const SocialNetwork& net, const ModelParams& params,
                        const SolveConstraints& constraints = {},
                        const ExactConfig& config = {});

SolveResult solve_lns(const SocialNetwork& net, const ModelParams& params,
                      const LnsConfig& config,
                      const SolveConstraints& constraints = {});

SolveResult solve_local_search(const SocialNetwork& net, const ModelParams& params,
                               const LnsConfig& config,
                               const SolveConstraints& constraints = {});

struct RepairStats {
  std::int64_t candidates = 0;  // unordered splits within the size bounds
  std::int64_t feasible = 0;    // of those, the ones honoring constraints
};

// Re-partitions the union of groups g1 and g2 optimally. Throws
// kNoFeasibleSplit when no split satisfies bounds and constraints.
Partition repair_two_groups(const SocialNetwork& net, const ModelParams& params,
                            const Partition& partition, int g1, int g2,
                            const SolveConstraints& constraints = {},
                            RepairStats* stats = nullptr);

Partition baseline_random(const SocialNetwork& net, const ModelParams& params,
                          std::uint64_t seed);
Partition baseline_network(const SocialNetwork& net, const ModelParams& params,
                           std::uint64_t seed);
Partition baseline_even_users(const SocialNetwork& net, const ModelParams& params,
                              std::uint64_t seed);

// Wraps a baseline partition into a SolveResult.
SolveResult solve_baseline(const SocialNetwork& net, const ModelParams& params,
                           Algorithm algorithm, std::uint64_t seed);

}  // namespace peergroup

#endif  // PEERGROUP_SOLVERS_HPP_
