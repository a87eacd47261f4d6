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

// Synthetic rosters: Watts-Strogatz small-world skeletons decorated with
// behaviors, tie directions and tie strengths.

#ifndef PEERGROUP_INSTANCE_GEN_HPP_
#define PEERGROUP_INSTANCE_GEN_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "peergroup/model.hpp"

namespace peergroup {

struct WsParams {
  int n = 30;
  int k = 4;  // even ring degree
  double p = 0.25;
  std::uint64_t seed = 0;
};

struct DecorationParams {
  double user_ratio = 0.68;
  double strong_ratio = 0.5;
  double reciprocity = 1.0;
  std::uint64_t seed = 0;
};

using UndirectedEdge = std::pair<int, int>;

// Ring lattice with each edge's far endpoint rewired with probability p to a
// uniform target avoiding self-loops and duplicates. Exactly n * k / 2 edges.
// Throws Error(kBadDegree) unless k is even and 2 <= k < n.
std::vector<UndirectedEdge> generate_ws(const WsParams& params);

// Nodes are named "v<index>" zero-padded to a common width. Exactly
// round(user_ratio * n) users; each edge yields u -> v and, with probability
// reciprocity, v -> u; each arc is strong with probability strong_ratio.
SocialNetwork decorate(int node_count, const std::vector<UndirectedEdge>& edges,
                       const DecorationParams& params);

// generate_ws + decorate with seeds derived from `seed`.
SocialNetwork generate_instance(int n, std::uint64_t seed, double user_ratio = 0.68,
                                int k = 4, double p = 0.25);

// Average local clustering coefficient of an undirected edge set.
double average_clustering(int node_count, const std::vector<UndirectedEdge>& edges);

}  // namespace peergroup

#endif  // PEERGROUP_INSTANCE_GEN_HPP_
