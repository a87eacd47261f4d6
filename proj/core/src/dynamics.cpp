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

#include "peergroup/dynamics.hpp"

#include <algorithm>
#include <array>
#include <string>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {
namespace {

// Indexed by [same_group][pair kind][pre tie]; pair kind 0 = both users,
// 1 = both non-users, 2 = mixed (either direction).
constexpr std::array<std::array<std::array<PostTie, 3>, 3>, 2> kTransitions = {{
    // separate groups
    {{
        {PostTie::kNone, PostTie::kNone, PostTie::kStrong},
        {PostTie::kNone, PostTie::kWeak, PostTie::kStrong},
        {PostTie::kNone, PostTie::kNone, PostTie::kWeak},
    }},
    // same group
    {{
        {PostTie::kStrong, PostTie::kStrong, PostTie::kStrong},
        {PostTie::kStrong, PostTie::kStrong, PostTie::kStrong},
        {PostTie::kWeak, PostTie::kWeak, PostTie::kStrong},
    }},
}};

int pair_kind(Behavior from, Behavior to) {
  if (from != to) return 2;
  return from == Behavior::kUser ? 0 : 1;
}

}  // namespace

PostTie tie_transition(Behavior from, Behavior to, PreTie pre, bool same_group) {
  return kTransitions[same_group ? 1 : 0][pair_kind(from, to)]
                     [static_cast<int>(pre)];
}

double raw_weight(PostTie tie, const ModelParams& params) {
  switch (tie) {
    case PostTie::kStrong: return params.weight_strong;
    case PostTie::kWeak: return params.weight_weak;
    case PostTie::kNone: return 0.0;
  }
  return 0.0;
}

std::optional<int> WeightedNetwork::index_of(std::string_view id) const {
  for (int i = 0; i < size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  return std::nullopt;
}

double WeightedNetwork::weight(int from, int to) const {
  for (const InfluenceArc& arc : incoming_[to]) {
    if (arc.from == from) return arc.weight;
  }
  return 0.0;
}

double WeightedNetwork::weight(std::string_view from, std::string_view to) const {
  auto i = index_of(from);
  auto j = index_of(to);
  if (!i || !j) return 0.0;
  return weight(*i, *j);
}

double WeightedNetwork::incoming_sum(int to) const {
  double sum = 0.0;
  for (const InfluenceArc& arc : incoming_[to]) sum += arc.weight;
  return sum;
}

WeightedNetwork apply_intervention(const SocialNetwork& net,
                                   const Partition& partition,
                                   const ModelParams& params) {
  validate_params(params);
  auto violations = validate_partition(net, partition, params.capacity);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInfeasiblePartition,
                "invalid partition: " + violations.front().message());
  }
  IndexedNetwork indexed(net);
  return apply_intervention(indexed, indexed.dense_assignment(partition), params);
}

WeightedNetwork apply_intervention(const IndexedNetwork& net,
                                   std::span<const int> labels,
                                   const ModelParams& params) {
  const int n = net.size();
  int group_count = 0;
  for (int label : labels) group_count = std::max(group_count, label + 1);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(group_count));
  for (int i = 0; i < n; ++i) members[labels[i]].push_back(i);

  std::vector<WeightedNode> nodes;
  nodes.reserve(static_cast<std::size_t>(n) +
                (params.include_facilitator ? group_count : 0));
  for (int i = 0; i < n; ++i) nodes.push_back({net.id(i), net.behavior(i), false});
  if (params.include_facilitator) {
    for (int g = 0; g < group_count; ++g) {
      nodes.push_back({fmt::format("facilitator:{}", g), Behavior::kNonUser, true});
    }
  }

  // Raw weights per target; within a group every ordered pair carries a tie,
  // across groups only surviving pre-ties matter.
  std::vector<std::vector<InfluenceArc>> incoming(nodes.size());
  for (int j = 0; j < n; ++j) {
    auto& in = incoming[j];
    const int group = labels[j];
    for (int i : members[group]) {
      if (i == j) continue;
      const PostTie tie =
          tie_transition(net.behavior(i), net.behavior(j), net.pre_tie(i, j), true);
      in.push_back({i, raw_weight(tie, params)});
    }
    for (int i : net.in_neighbors(j)) {
      if (labels[i] == group) continue;
      const PostTie tie =
          tie_transition(net.behavior(i), net.behavior(j), net.pre_tie(i, j), false);
      if (tie != PostTie::kNone) in.push_back({i, raw_weight(tie, params)});
    }
    if (params.include_facilitator) {
      const PostTie tie = net.is_user(j) ? PostTie::kWeak : PostTie::kStrong;
      in.push_back({n + group, raw_weight(tie, params)});
    }
    std::sort(in.begin(), in.end(), [](const InfluenceArc& a, const InfluenceArc& b) {
      return a.from < b.from;
    });
    double total = 0.0;
    for (const InfluenceArc& arc : in) total += arc.weight;
    if (total > 0.0) {
      for (InfluenceArc& arc : in) arc.weight /= total;
    }
    std::erase_if(in, [](const InfluenceArc& arc) { return arc.weight <= 0.0; });
  }
  return WeightedNetwork(std::move(nodes), std::move(incoming));
}

}  // namespace peergroup
