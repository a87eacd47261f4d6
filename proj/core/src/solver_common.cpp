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

#include "solver_common.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "peergroup/dynamics.hpp"
#include "peergroup/error.hpp"
#include "peergroup/influence.hpp"

namespace peergroup {

NodePair::NodePair(NodeId a, NodeId b) {
  if (b < a) std::swap(a, b);
  first = std::move(a);
  second = std::move(b);
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kExact: return "exact";
    case Algorithm::kLns: return "lns";
    case Algorithm::kLocalSearch: return "local";
    case Algorithm::kRandom: return "random";
    case Algorithm::kNetwork: return "network";
    case Algorithm::kEvenUsers: return "even";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kExact, Algorithm::kLns, Algorithm::kLocalSearch,
                      Algorithm::kRandom, Algorithm::kNetwork, Algorithm::kEvenUsers}) {
    if (algorithm_name(a) == name) return a;
  }
  throw Error(ErrorCode::kBadInput, fmt::format("unknown algorithm '{}'", name));
}

Evaluation evaluate_partition(const SocialNetwork& net, const Partition& partition,
                              const ModelParams& params) {
  const WeightedNetwork wnet = apply_intervention(net, partition, params);
  Evaluation out;
  out.expected_nonusers = expected_nonusers(wnet, params);
  out.success = success(wnet, params);
  out.flips = flip_profile(wnet, params);
  out.partition = partition;
  return out;
}

namespace internal {

void require_feasible(int node_count, const CapacityBounds& bounds) {
  if (feasible_group_counts(node_count, bounds).empty()) {
    throw Error(ErrorCode::kInfeasibleBounds,
                fmt::format("{} nodes cannot be split into groups of {}..{}",
                            node_count, bounds.lo, bounds.hi));
  }
}

std::vector<std::vector<int>> members_by_label(std::span<const int> labels) {
  int count = 0;
  for (int label : labels) count = std::max(count, label + 1);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(count));
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) out[labels[i]].push_back(i);
  return out;
}

double objective_of(const GroupScorer& scorer, std::span<const int> labels) {
  double total = 0.0;
  for (const auto& members : members_by_label(labels)) {
    total += scorer.group_score(members);
  }
  return total;
}

std::vector<int> output_labels(std::span<const int> labels,
                               const ConstraintIndex& constraints) {
  if (constraints.empty()) return canonical_labels(labels);
  return {labels.begin(), labels.end()};
}

SolveResult make_result(const SocialNetwork& net, const IndexedNetwork& indexed,
                        const ModelParams& params, std::span<const int> labels,
                        Algorithm algorithm, std::uint64_t seed,
                        Clock::time_point start) {
  SolveResult result;
  result.partition = indexed.to_partition(labels);
  result.evaluation = evaluate_partition(net, result.partition, params);
  result.algorithm = algorithm;
  result.seed = seed;
  result.wall_time = Clock::now() - start;
  return result;
}

void throw_if_stopped(const std::stop_token& stop) {
  if (stop.stop_requested()) throw Error(ErrorCode::kCancelled, "solve cancelled");
}

}  // namespace internal
}  // namespace peergroup
