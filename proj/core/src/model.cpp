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

#include "peergroup/model.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadInput: return "bad_input";
    case ErrorCode::kInfeasiblePartition: return "infeasible_partition";
    case ErrorCode::kInfeasibleBounds: return "infeasible_bounds";
    case ErrorCode::kUnsatisfiableConstraints: return "unsatisfiable_constraints";
    case ErrorCode::kInstanceTooLarge: return "instance_too_large";
    case ErrorCode::kTimeBudgetZero: return "time_budget_zero";
    case ErrorCode::kNoFeasibleSplit: return "no_feasible_split";
    case ErrorCode::kUnnormalizedInput: return "unnormalized_input";
    case ErrorCode::kBadDegree: return "bad_degree";
    case ErrorCode::kInfeasibleS: return "infeasible_s";
    case ErrorCode::kSinkUnwritable: return "sink_unwritable";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflictingUpdate: return "conflicting_update";
    case ErrorCode::kStorageFull: return "storage_full";
    case ErrorCode::kCancelled: return "cancelled";
  }
  return "unknown";
}

std::size_t SocialNetwork::user_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& node) {
        return node.behavior == Behavior::kUser;
      }));
}

void validate_params(const ModelParams& params) {
  auto is_probability = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!is_probability(params.omega_user_given_non) ||
      !is_probability(params.omega_non_given_user)) {
    throw Error(ErrorCode::kBadInput, "switch probabilities must lie in [0, 1]");
  }
  if (!(params.weight_weak > 0.0) ||
      !(params.weight_weak < params.weight_strong)) {
    throw Error(ErrorCode::kBadInput,
                fmt::format("tie weights must satisfy 0 < weak < strong (got "
                            "weak={}, strong={})",
                            params.weight_weak, params.weight_strong));
  }
  if (params.capacity.lo < 1 || params.capacity.lo > params.capacity.hi) {
    throw Error(ErrorCode::kBadInput,
                fmt::format("capacity bounds must satisfy 1 <= lo <= hi (got "
                            "lo={}, hi={})",
                            params.capacity.lo, params.capacity.hi));
  }
}

std::optional<int> Partition::group_of(std::string_view id) const {
  auto it = assignment_.find(std::string(id));
  if (it == assignment_.end()) return std::nullopt;
  return it->second;
}

bool Partition::same_group(std::string_view a, std::string_view b) const {
  auto ga = group_of(a);
  auto gb = group_of(b);
  return ga.has_value() && gb.has_value() && *ga == *gb;
}

int Partition::group_count() const {
  int count = 0;
  for (const auto& [id, group] : assignment_) count = std::max(count, group + 1);
  return count;
}

std::vector<std::vector<NodeId>> Partition::groups() const {
  std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(group_count()));
  for (const auto& [id, group] : assignment_) {
    if (group >= 0) out[group].push_back(id);
  }
  return out;
}

std::string Violation::message() const {
  auto node = [this](std::size_t i) {
    return i < nodes.size() ? nodes[i] : std::string("?");
  };
  switch (kind) {
    case ViolationKind::kSelfArc:
      return fmt::format("self arc on node '{}'", node(0));
    case ViolationKind::kDuplicateArc:
      return fmt::format("duplicate arc '{}' -> '{}'", node(0), node(1));
    case ViolationKind::kDanglingEndpoint:
      return fmt::format("arc '{}' -> '{}' references undeclared node '{}'",
                         node(0), node(1), node(2));
    case ViolationKind::kDuplicateNode:
      return fmt::format("node '{}' declared more than once", node(0));
    case ViolationKind::kNodeUnassigned:
      return fmt::format("node '{}' is not assigned to a group", node(0));
    case ViolationKind::kUnknownNode:
      return fmt::format("partition assigns unknown node '{}'", node(0));
    case ViolationKind::kNegativeGroup:
      return fmt::format("node '{}' has negative group index {}", node(0), group);
    case ViolationKind::kEmptyGroup:
      return fmt::format("group {} is empty", group);
    case ViolationKind::kGroupTooSmall:
      return fmt::format("group {} has {} members, below the lower bound", group,
                         size);
    case ViolationKind::kGroupTooLarge:
      return fmt::format("group {} has {} members, above the upper bound", group,
                         size);
  }
  return "unknown violation";
}

std::vector<Violation> validate_network(const SocialNetwork& net) {
  std::vector<Violation> out;
  std::set<std::string_view> declared;
  for (const Node& node : net.nodes) {
    if (!declared.insert(node.id).second) {
      out.push_back({ViolationKind::kDuplicateNode, {node.id}});
    }
  }
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const Arc& arc : net.arcs) {
    if (arc.from == arc.to) {
      out.push_back({ViolationKind::kSelfArc, {arc.from}});
      continue;
    }
    for (const NodeId* end : {&arc.from, &arc.to}) {
      if (!declared.contains(*end)) {
        out.push_back({ViolationKind::kDanglingEndpoint, {arc.from, arc.to, *end}});
      }
    }
    if (!seen.emplace(arc.from, arc.to).second) {
      out.push_back({ViolationKind::kDuplicateArc, {arc.from, arc.to}});
    }
  }
  return out;
}

std::vector<Violation> validate_partition(const SocialNetwork& net,
                                          const Partition& partition,
                                          const CapacityBounds& bounds) {
  std::vector<Violation> out;
  std::set<std::string_view> declared;
  for (const Node& node : net.nodes) {
    declared.insert(node.id);
    if (!partition.group_of(node.id).has_value()) {
      out.push_back({ViolationKind::kNodeUnassigned, {node.id}});
    }
  }
  std::map<int, int> sizes;
  for (const auto& [id, group] : partition.assignment()) {
    if (!declared.contains(id)) {
      out.push_back({ViolationKind::kUnknownNode, {id}});
      continue;
    }
    if (group < 0) {
      out.push_back({ViolationKind::kNegativeGroup, {id}, group});
      continue;
    }
    ++sizes[group];
  }
  const int group_count = sizes.empty() ? 0 : sizes.rbegin()->first + 1;
  for (int g = 0; g < group_count; ++g) {
    auto it = sizes.find(g);
    const int size = it == sizes.end() ? 0 : it->second;
    if (size == 0) {
      out.push_back({ViolationKind::kEmptyGroup, {}, g, 0});
    } else if (size < bounds.lo) {
      out.push_back({ViolationKind::kGroupTooSmall, {}, g, size});
    } else if (size > bounds.hi) {
      out.push_back({ViolationKind::kGroupTooLarge, {}, g, size});
    }
  }
  return out;
}

std::vector<int> feasible_group_counts(int node_count,
                                       const CapacityBounds& bounds) {
  std::vector<int> out;
  if (node_count < 1 || bounds.lo < 1 || bounds.lo > bounds.hi) return out;
  // S * hi >= n  <=>  S >= ceil(n / hi);  S * lo <= n  <=>  S <= floor(n / lo).
  const int first = (node_count + bounds.hi - 1) / bounds.hi;
  const int last = node_count / bounds.lo;
  for (int s = std::max(first, 1); s <= last; ++s) out.push_back(s);
  return out;
}

IndexedNetwork::IndexedNetwork(const SocialNetwork& net) {
  auto violations = validate_network(net);
  if (!violations.empty()) {
    throw Error(ErrorCode::kBadInput,
                "invalid network: " + violations.front().message());
  }
  std::vector<const Node*> order;
  order.reserve(net.nodes.size());
  for (const Node& node : net.nodes) order.push_back(&node);
  std::sort(order.begin(), order.end(),
            [](const Node* a, const Node* b) { return a->id < b->id; });

  const std::size_t n = order.size();
  ids_.reserve(n);
  behaviors_.reserve(n);
  for (const Node* node : order) {
    lookup_.emplace(node->id, static_cast<int>(ids_.size()));
    ids_.push_back(node->id);
    behaviors_.push_back(node->behavior);
    if (node->behavior == Behavior::kUser) ++user_count_;
  }
  pre_.assign(n * n, static_cast<std::uint8_t>(PreTie::kNone));
  in_.resize(n);
  for (const Arc& arc : net.arcs) {
    const int from = lookup_.find(arc.from)->second;
    const int to = lookup_.find(arc.to)->second;
    pre_[static_cast<std::size_t>(from) * n + to] = static_cast<std::uint8_t>(
        arc.strength == TieStrength::kStrong ? PreTie::kStrong : PreTie::kWeak);
    in_[to].push_back(from);
  }
  for (auto& sources : in_) std::sort(sources.begin(), sources.end());
}

std::optional<int> IndexedNetwork::index_of(std::string_view id) const {
  auto it = lookup_.find(id);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> IndexedNetwork::dense_assignment(const Partition& partition) const {
  std::vector<int> labels(ids_.size(), -1);
  for (const auto& [id, group] : partition.assignment()) {
    auto index = index_of(id);
    if (!index) {
      throw Error(ErrorCode::kInfeasiblePartition,
                  fmt::format("partition assigns unknown node '{}'", id));
    }
    labels[*index] = group;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      throw Error(ErrorCode::kInfeasiblePartition,
                  fmt::format("node '{}' is not assigned to a group", ids_[i]));
    }
  }
  return labels;
}

Partition IndexedNetwork::to_partition(std::span<const int> labels) const {
  std::map<NodeId, int> assignment;
  for (std::size_t i = 0; i < labels.size(); ++i) assignment.emplace(ids_[i], labels[i]);
  return Partition(std::move(assignment));
}

std::vector<int> canonical_labels(std::span<const int> labels) {
  std::map<int, int> relabel;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int label : labels) {
    auto [it, inserted] = relabel.emplace(label, static_cast<int>(relabel.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace peergroup
