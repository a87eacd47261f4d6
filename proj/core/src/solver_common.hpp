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

#ifndef PEERGROUP_SRC_SOLVER_COMMON_HPP_
#define PEERGROUP_SRC_SOLVER_COMMON_HPP_

#include <chrono>
#include <span>
#include <vector>

#include "peergroup/model.hpp"
#include "peergroup/solvers.hpp"
#include "search_support.hpp"

namespace peergroup::internal {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Throws kInfeasibleBounds when no group count fits the roster.
void require_feasible(int node_count, const CapacityBounds& bounds);

// Members of each label, ascending.
std::vector<std::vector<int>> members_by_label(std::span<const int> labels);

// Sum of group scores in label order.
double objective_of(const GroupScorer& scorer, std::span<const int> labels);

// Canonical relabelling unless constraints fix label identities.
std::vector<int> output_labels(std::span<const int> labels,
                               const ConstraintIndex& constraints);

// Builds the final SolveResult through evaluate_partition.
SolveResult make_result(const SocialNetwork& net, const IndexedNetwork& indexed,
                        const ModelParams& params, std::span<const int> labels,
                        Algorithm algorithm, std::uint64_t seed,
                        Clock::time_point start);

void throw_if_stopped(const std::stop_token& stop);

}  // namespace peergroup::internal

#endif  // PEERGROUP_SRC_SOLVER_COMMON_HPP_
