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

// Internal machinery shared by the search algorithms.

#ifndef PEERGROUP_SRC_SEARCH_SUPPORT_HPP_
#define PEERGROUP_SRC_SEARCH_SUPPORT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "peergroup/model.hpp"
#include "peergroup/random.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup::internal {

// The objective separates over groups: a member's expected contribution
// depends only on who shares its group (cross-group ties are fixed by the
// pre-intervention network). For target j in group G,
//
//   total(j)    = base_total(j)    + sum_{i in G, i != j} delta_total(i, j)
//   opposite(j) = base_opposite(j) + sum_{i in G, i != j} delta_opposite(i, j)
//
// where the base terms assume every pre-tie source is in another group (plus
// the facilitator) and the deltas swap a source's separate-group tie for its
// same-group tie.
class GroupScorer {
 public:
  GroupScorer(const IndexedNetwork& net, const ModelParams& params);

  int size() const { return n_; }
  double node_score(int j, std::span<const int> members) const;
  double group_score(std::span<const int> members) const;
  double base_total(int j) const { return base_total_[j]; }
  double base_opposite(int j) const { return base_opposite_[j]; }
  // Row-major by target: delta_total(i, j) lives at [j * n + i].
  double delta_total(int i, int j) const { return delta_total_[idx(j, i)]; }
  double delta_opposite(int i, int j) const { return delta_opposite_[idx(j, i)]; }
  bool is_user(int j) const { return user_[j] != 0; }
  double contribution(int j, double total, double opposite) const;

 private:
  std::size_t idx(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(col);
  }

  int n_;
  double omega_un_;
  double omega_nu_;
  std::vector<double> base_total_;
  std::vector<double> base_opposite_;
  std::vector<double> delta_total_;
  std::vector<double> delta_opposite_;
  std::vector<std::uint8_t> user_;
};

// Dense, validated form of SolveConstraints. Must-link components are
// collapsed into atoms; pins propagate along must-links, and nodes pinned to
// the same group are implicitly must-linked.
class ConstraintIndex {
 public:
  // Throws kBadInput for unknown nodes, kUnsatisfiableConstraints for
  // contradictions detectable without search.
  ConstraintIndex(const IndexedNetwork& net, const SolveConstraints& constraints,
                  const CapacityBounds& bounds);

  bool empty() const { return empty_; }
  int pin(int i) const { return pin_[i]; }
  int max_pin() const { return max_pin_; }
  bool frozen(int g) const {
    return g >= 0 && g < static_cast<int>(frozen_.size()) && frozen_[g] != 0;
  }
  std::span<const int> must(int i) const { return must_[i]; }
  std::span<const int> cannot(int i) const { return cannot_[i]; }
  bool cannot_link(int a, int b) const;

  struct Atom {
    std::vector<int> members;
    int pin = -1;
  };
  const std::vector<Atom>& atoms() const { return atoms_; }
  int atom_of(int i) const { return atom_of_[i]; }

  // Group counts worth trying: feasible for the size bounds and large enough
  // for every pinned label.
  std::vector<int> candidate_group_counts(int node_count,
                                          const CapacityBounds& bounds) const;

  // True when labels satisfy pins, links and frozen groups.
  bool satisfied_by(std::span<const int> labels) const;

 private:
  bool empty_ = true;
  int max_pin_ = -1;
  std::vector<int> pin_;
  std::vector<std::uint8_t> frozen_;
  std::vector<std::vector<int>> must_;
  std::vector<std::vector<int>> cannot_;
  std::vector<Atom> atoms_;
  std::vector<int> atom_of_;
};

// Random feasible labelling with exactly `group_count` non-empty groups, or
// nullopt if the bounded backtracking search finds none.
std::optional<std::vector<int>> random_feasible_labels(
    const IndexedNetwork& net, const ConstraintIndex& constraints,
    const CapacityBounds& bounds, int group_count, Rng& rng);

struct SplitChoice {
  std::uint64_t first_side = 0;  // local mask of members going to first group
  double score = 0.0;            // group_score(first) + group_score(second)
};

// Exhaustive optimal re-partition of the union of two groups.
class TwoGroupRepair {
 public:
  TwoGroupRepair(const GroupScorer& scorer, const ConstraintIndex& constraints,
                 const CapacityBounds& bounds);

  // `members` is the sorted union; `g1`/`g2` are the labels being rebuilt.
  // Returns the best split, oriented so the first side is labelled g1.
  std::optional<SplitChoice> best_split(std::span<const int> members, int g1,
                                        int g2, RepairStats* stats = nullptr);

 private:
  const GroupScorer& scorer_;
  const ConstraintIndex& constraints_;
  CapacityBounds bounds_;
  std::vector<double> local_total_;
  std::vector<double> local_opposite_;
};

// Largest union the two-group repair will enumerate.
inline constexpr int kMaxRepairUnion = 26;

}  // namespace peergroup::internal

#endif  // PEERGROUP_SRC_SEARCH_SUPPORT_HPP_
