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

// Domain types shared by every module: behavior-labeled social networks,
// partitions into intervention groups, model parameters and the validation
// rules that tie them together.

#ifndef PEERGROUP_MODEL_HPP_
#define PEERGROUP_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace peergroup {

// User encodes b = 1, NonUser encodes b = 0.
enum class Behavior : std::uint8_t { kNonUser = 0, kUser = 1 };

// Strong encodes s = 1, Weak encodes s = 0.
enum class TieStrength : std::uint8_t { kWeak = 0, kStrong = 1 };

// Pre-intervention relation of an ordered pair, including the absence of an
// arc.
enum class PreTie : std::uint8_t { kNone = 0, kWeak = 1, kStrong = 2 };

using NodeId = std::string;

struct Node {
  NodeId id;
  Behavior behavior = Behavior::kNonUser;

  bool operator==(const Node&) const = default;
};

// Arc (from, to): `to` reported `from` as a friend, so influence flows
// from -> to.
struct Arc {
  NodeId from;
  NodeId to;
  TieStrength strength = TieStrength::kWeak;

  bool operator==(const Arc&) const = default;
};

struct SocialNetwork {
  std::vector<Node> nodes;
  std::vector<Arc> arcs;

  std::size_t user_count() const;
  std::size_t nonuser_count() const { return nodes.size() - user_count(); }

  bool operator==(const SocialNetwork&) const = default;
};

struct CapacityBounds {
  int lo = 3;
  int hi = 8;

  bool operator==(const CapacityBounds&) const = default;
};

struct ModelParams {
  double omega_user_given_non = 1.0;  // NonUser -> User once threshold is hit
  double omega_non_given_user = 0.8;  // User -> NonUser once threshold is hit
  double weight_strong = 3.0;
  double weight_weak = 1.0;
  CapacityBounds capacity;
  bool include_facilitator = true;

  bool operator==(const ModelParams&) const = default;
};

// Throws Error(kBadInput) unless 0 <= omegas <= 1, 0 < weight_weak <
// weight_strong and 1 <= lo <= hi.
void validate_params(const ModelParams& params);

// Assignment of node ids to 0-based group indices. Co-membership is always
// derived from the indices, never stored.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::map<NodeId, int> assignment)
      : assignment_(std::move(assignment)) {}

  const std::map<NodeId, int>& assignment() const { return assignment_; }
  void assign(const NodeId& id, int group) { assignment_[id] = group; }
  void erase(const NodeId& id) { assignment_.erase(id); }
  std::optional<int> group_of(std::string_view id) const;
  bool same_group(std::string_view a, std::string_view b) const;

  std::size_t size() const { return assignment_.size(); }
  // One past the largest group index (0 when empty).
  int group_count() const;
  // Members of every group index in [0, group_count()), ordered by id.
  std::vector<std::vector<NodeId>> groups() const;

  bool operator==(const Partition&) const = default;

 private:
  std::map<NodeId, int> assignment_;
};

enum class ViolationKind {
  kSelfArc,
  kDuplicateArc,
  kDanglingEndpoint,
  kDuplicateNode,
  kNodeUnassigned,
  kUnknownNode,
  kNegativeGroup,
  kEmptyGroup,
  kGroupTooSmall,
  kGroupTooLarge,
};

struct Violation {
  ViolationKind kind;
  std::vector<NodeId> nodes;
  int group = -1;
  int size = 0;

  std::string message() const;
  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_network(const SocialNetwork& net);

std::vector<Violation> validate_partition(const SocialNetwork& net,
                                          const Partition& partition,
                                          const CapacityBounds& bounds);

// Every S >= 1 with S * lo <= n <= S * hi, ascending. Empty means the
// instance is infeasible.
std::vector<int> feasible_group_counts(int node_count,
                                       const CapacityBounds& bounds);

// Dense view of a valid network used by the numerical modules. Node indices
// follow the lexicographic order of node ids, so "smallest member id" and
// "smallest member index" coincide.
class IndexedNetwork {
 public:
  // Throws Error(kBadInput) when validate_network reports violations.
  explicit IndexedNetwork(const SocialNetwork& net);

  int size() const { return static_cast<int>(ids_.size()); }
  const NodeId& id(int i) const { return ids_[i]; }
  const std::vector<NodeId>& ids() const { return ids_; }
  std::optional<int> index_of(std::string_view id) const;
  Behavior behavior(int i) const { return behaviors_[i]; }
  bool is_user(int i) const { return behaviors_[i] == Behavior::kUser; }
  PreTie pre_tie(int from, int to) const {
    return static_cast<PreTie>(pre_[static_cast<std::size_t>(from) * size() + to]);
  }
  // Sources with a pre-intervention arc into `to`, ascending.
  std::span<const int> in_neighbors(int to) const { return in_[to]; }
  int user_count() const { return user_count_; }

  // Dense group labels, one per node. Throws Error(kInfeasiblePartition) when
  // a node is unassigned or the partition names unknown nodes.
  std::vector<int> dense_assignment(const Partition& partition) const;
  Partition to_partition(std::span<const int> labels) const;

 private:
  std::vector<NodeId> ids_;
  std::map<std::string, int, std::less<>> lookup_;
  std::vector<Behavior> behaviors_;
  std::vector<std::uint8_t> pre_;
  std::vector<std::vector<int>> in_;
  int user_count_ = 0;
};

// Relabels groups 0..S-1 in order of their smallest member index.
std::vector<int> canonical_labels(std::span<const int> labels);

}  // namespace peergroup

#endif  // PEERGROUP_MODEL_HPP_
