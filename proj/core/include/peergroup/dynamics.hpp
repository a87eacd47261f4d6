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

// Deterministic rewiring of the network induced by a partition, facilitator
// injection, and per-target weight normalization.

#ifndef PEERGROUP_DYNAMICS_HPP_
#define PEERGROUP_DYNAMICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "peergroup/model.hpp"

namespace peergroup {

// One-hot post-intervention tie state.
enum class PostTie : std::uint8_t { kNone = 0, kWeak = 1, kStrong = 2 };

// Post-intervention tie from `from` to `to` given both behaviors, the
// pre-intervention tie and whether the pair shares a group.
//
//   same group:      same behavior -> strong; mixed -> strong if it was
//                    strong, weak otherwise.
//   separate groups: strong stays strong between equal behaviors and becomes
//                    weak between mixed ones; weak survives only between two
//                    non-users; no tie stays no tie.
PostTie tie_transition(Behavior from, Behavior to, PreTie pre, bool same_group);

double raw_weight(PostTie tie, const ModelParams& params);

struct WeightedNode {
  NodeId id;
  Behavior behavior = Behavior::kNonUser;
  bool is_facilitator = false;
};

struct InfluenceArc {
  int from = 0;
  double weight = 0.0;
};

// Rewired network with normalized incoming weights. Original nodes keep the
// dense indices of the IndexedNetwork they came from; facilitators (one per
// group) are appended after them.
class WeightedNetwork {
 public:
  WeightedNetwork(std::vector<WeightedNode> nodes,
                  std::vector<std::vector<InfluenceArc>> incoming)
      : nodes_(std::move(nodes)), incoming_(std::move(incoming)) {}

  int size() const { return static_cast<int>(nodes_.size()); }
  const WeightedNode& node(int i) const { return nodes_[i]; }
  const std::vector<WeightedNode>& nodes() const { return nodes_; }
  // Incoming arcs of `to` with positive weight, ordered by source index.
  std::span<const InfluenceArc> incoming(int to) const { return incoming_[to]; }

  std::optional<int> index_of(std::string_view id) const;
  // 0 when there is no post-intervention tie.
  double weight(int from, int to) const;
  double weight(std::string_view from, std::string_view to) const;
  double incoming_sum(int to) const;

 private:
  std::vector<WeightedNode> nodes_;
  std::vector<std::vector<InfluenceArc>> incoming_;
};

// Throws Error(kInfeasiblePartition) when the partition does not validate
// against the network and params.capacity.
WeightedNetwork apply_intervention(const SocialNetwork& net,
                                   const Partition& partition,
                                   const ModelParams& params);

// Dense variant; `labels` must be a valid group labelling of `net`.
WeightedNetwork apply_intervention(const IndexedNetwork& net,
                                   std::span<const int> labels,
                                   const ModelParams& params);

}  // namespace peergroup

#endif  // PEERGROUP_DYNAMICS_HPP_
