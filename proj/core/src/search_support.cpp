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

#include "search_support.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include <fmt/format.h>

#include "peergroup/dynamics.hpp"
#include "peergroup/error.hpp"

namespace peergroup::internal {
namespace {

constexpr double kScoreEpsilon = 1e-12;
constexpr std::int64_t kConstructionStepLimit = 200000;

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

[[noreturn]] void unsatisfiable(const std::string& why) {
  throw Error(ErrorCode::kUnsatisfiableConstraints, why);
}

}  // namespace

GroupScorer::GroupScorer(const IndexedNetwork& net, const ModelParams& params)
    : n_(net.size()),
      omega_un_(params.omega_user_given_non),
      omega_nu_(params.omega_non_given_user),
      base_total_(static_cast<std::size_t>(n_), 0.0),
      base_opposite_(static_cast<std::size_t>(n_), 0.0),
      delta_total_(static_cast<std::size_t>(n_) * n_, 0.0),
      delta_opposite_(static_cast<std::size_t>(n_) * n_, 0.0),
      user_(static_cast<std::size_t>(n_), 0) {
  for (int j = 0; j < n_; ++j) {
    user_[j] = net.is_user(j) ? 1 : 0;
    const Behavior bj = net.behavior(j);
    for (int i : net.in_neighbors(j)) {
      const double w = raw_weight(
          tie_transition(net.behavior(i), bj, net.pre_tie(i, j), false), params);
      base_total_[j] += w;
      if (net.behavior(i) != bj) base_opposite_[j] += w;
    }
    if (params.include_facilitator) {
      // The facilitator is a non-user: strong tie to non-users, weak to users.
      const double w = raw_weight(
          net.is_user(j) ? PostTie::kWeak : PostTie::kStrong, params);
      base_total_[j] += w;
      if (net.is_user(j)) base_opposite_[j] += w;
    }
    for (int i = 0; i < n_; ++i) {
      if (i == j) continue;
      const PreTie pre = net.pre_tie(i, j);
      const double same =
          raw_weight(tie_transition(net.behavior(i), bj, pre, true), params);
      const double separate =
          raw_weight(tie_transition(net.behavior(i), bj, pre, false), params);
      delta_total_[idx(j, i)] = same - separate;
      if (net.behavior(i) != bj) delta_opposite_[idx(j, i)] = same - separate;
    }
  }
}

double GroupScorer::contribution(int j, double total, double opposite) const {
  double fraction = total > 0.0 ? opposite / total : 0.0;
  fraction = std::clamp(fraction, 0.0, 1.0);
  return user_[j] ? omega_nu_ * fraction : 1.0 - omega_un_ * fraction;
}

double GroupScorer::node_score(int j, std::span<const int> members) const {
  double total = base_total_[j];
  double opposite = base_opposite_[j];
  const double* dt = &delta_total_[idx(j, 0)];
  const double* dop = &delta_opposite_[idx(j, 0)];
  for (int i : members) {
    total += dt[i];
    opposite += dop[i];
  }
  return contribution(j, total, opposite);
}

double GroupScorer::group_score(std::span<const int> members) const {
  double score = 0.0;
  for (int j : members) score += node_score(j, members);
  return score;
}

ConstraintIndex::ConstraintIndex(const IndexedNetwork& net,
                                 const SolveConstraints& constraints,
                                 const CapacityBounds& bounds)
    : empty_(constraints.empty()),
      pin_(static_cast<std::size_t>(net.size()), -1),
      must_(static_cast<std::size_t>(net.size())),
      cannot_(static_cast<std::size_t>(net.size())),
      atom_of_(static_cast<std::size_t>(net.size()), -1) {
  const int n = net.size();
  auto index = [&](const NodeId& id) {
    auto i = net.index_of(id);
    if (!i) {
      throw Error(ErrorCode::kBadInput,
                  fmt::format("constraint references unknown node '{}'", id));
    }
    return *i;
  };

  DisjointSets sets(n);
  std::vector<int> first_pinned;  // representative node per pinned label
  for (const auto& [id, group] : constraints.pinned) {
    if (group < 0) {
      throw Error(ErrorCode::kBadInput,
                  fmt::format("node '{}' pinned to negative group {}", id, group));
    }
    const int i = index(id);
    pin_[i] = group;
    max_pin_ = std::max(max_pin_, group);
    if (static_cast<int>(first_pinned.size()) <= group) {
      first_pinned.resize(static_cast<std::size_t>(group) + 1, -1);
    }
    if (first_pinned[group] < 0) {
      first_pinned[group] = i;
    } else {
      sets.unite(first_pinned[group], i);
    }
  }
  for (const NodePair& pair : constraints.must_link) {
    if (constraints.cannot_link.contains(pair)) {
      unsatisfiable(fmt::format("'{}' and '{}' are both must-linked and cannot-linked",
                                pair.first, pair.second));
    }
    sets.unite(index(pair.first), index(pair.second));
  }

  std::vector<int> atom_index(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int root = sets.find(i);
    if (atom_index[root] < 0) {
      atom_index[root] = static_cast<int>(atoms_.size());
      atoms_.push_back({});
    }
    Atom& atom = atoms_[atom_index[root]];
    atom.members.push_back(i);
    atom_of_[i] = atom_index[root];
    if (pin_[i] >= 0) {
      if (atom.pin >= 0 && atom.pin != pin_[i]) {
        unsatisfiable(fmt::format("must-linked nodes are pinned to groups {} and {}",
                                  atom.pin, pin_[i]));
      }
      atom.pin = pin_[i];
    }
  }
  for (const Atom& atom : atoms_) {
    if (static_cast<int>(atom.members.size()) > bounds.hi) {
      unsatisfiable(fmt::format("{} nodes must share a group larger than {}",
                                atom.members.size(), bounds.hi));
    }
    for (int i : atom.members) {
      pin_[i] = atom.pin;
      for (int j : atom.members) {
        if (j != i) must_[i].push_back(j);
      }
    }
  }

  for (const NodePair& pair : constraints.cannot_link) {
    const int a = index(pair.first);
    const int b = index(pair.second);
    if (atom_of_[a] == atom_of_[b]) {
      unsatisfiable(fmt::format("'{}' and '{}' cannot be separated", pair.first,
                                pair.second));
    }
    cannot_[a].push_back(b);
    cannot_[b].push_back(a);
  }
  // Nodes pinned to different groups are separated as well.
  if (max_pin_ >= 0) {
    for (int a = 0; a < n; ++a) {
      if (pin_[a] < 0) continue;
      for (int b = 0; b < n; ++b) {
        if (pin_[b] >= 0 && pin_[b] != pin_[a]) cannot_[a].push_back(b);
      }
    }
  }
  for (auto& list : cannot_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  for (int g : constraints.frozen_groups) {
    if (g < 0) throw Error(ErrorCode::kBadInput, "negative frozen group index");
    if (g > max_pin_ || first_pinned[g] < 0) {
      unsatisfiable(fmt::format("frozen group {} has no pinned members", g));
    }
    if (static_cast<int>(frozen_.size()) <= g) {
      frozen_.resize(static_cast<std::size_t>(g) + 1, 0);
    }
    frozen_[g] = 1;
  }
}

bool ConstraintIndex::cannot_link(int a, int b) const {
  return std::binary_search(cannot_[a].begin(), cannot_[a].end(), b);
}

std::vector<int> ConstraintIndex::candidate_group_counts(
    int node_count, const CapacityBounds& bounds) const {
  std::vector<int> out;
  for (int s : feasible_group_counts(node_count, bounds)) {
    if (s > max_pin_) out.push_back(s);
  }
  return out;
}

bool ConstraintIndex::satisfied_by(std::span<const int> labels) const {
  const int n = static_cast<int>(labels.size());
  for (int i = 0; i < n; ++i) {
    if (pin_[i] >= 0 && labels[i] != pin_[i]) return false;
    if (frozen(labels[i]) && pin_[i] != labels[i]) return false;
    for (int j : must_[i]) {
      if (labels[j] != labels[i]) return false;
    }
    for (int j : cannot_[i]) {
      if (labels[j] == labels[i]) return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> random_feasible_labels(
    const IndexedNetwork& net, const ConstraintIndex& constraints,
    const CapacityBounds& bounds, int group_count, Rng& rng) {
  const int n = net.size();
  if (group_count < 1 || group_count <= constraints.max_pin()) return std::nullopt;
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> sizes(static_cast<std::size_t>(group_count), 0);
  const auto& atoms = constraints.atoms();

  auto conflicts = [&](const ConstraintIndex::Atom& atom, int g) {
    for (int i : atom.members) {
      for (int c : constraints.cannot(i)) {
        if (labels[c] == g) return true;
      }
    }
    return false;
  };
  auto place = [&](const ConstraintIndex::Atom& atom, int g) {
    for (int i : atom.members) labels[i] = g;
    sizes[g] += static_cast<int>(atom.members.size());
  };
  auto unplace = [&](const ConstraintIndex::Atom& atom, int g) {
    for (int i : atom.members) labels[i] = -1;
    sizes[g] -= static_cast<int>(atom.members.size());
  };

  std::vector<int> free_atoms;
  int remaining = 0;
  for (int a = 0; a < static_cast<int>(atoms.size()); ++a) {
    const auto& atom = atoms[a];
    if (atom.pin >= 0) {
      if (sizes[atom.pin] + static_cast<int>(atom.members.size()) > bounds.hi ||
          conflicts(atom, atom.pin)) {
        return std::nullopt;
      }
      place(atom, atom.pin);
    } else {
      free_atoms.push_back(a);
      remaining += static_cast<int>(atom.members.size());
    }
  }
  std::shuffle(free_atoms.begin(), free_atoms.end(), rng);
  std::stable_sort(free_atoms.begin(), free_atoms.end(), [&](int a, int b) {
    return atoms[a].members.size() > atoms[b].members.size();
  });

  auto deficit = [&] {
    int d = 0;
    for (int s : sizes) d += std::max(0, bounds.lo - s);
    return d;
  };
  std::int64_t steps = 0;
  std::vector<int> order(static_cast<std::size_t>(group_count));
  std::iota(order.begin(), order.end(), 0);

  // Depth-first placement; prunes any state whose unfilled minimum exceeds
  // the nodes still to be placed.
  auto dfs = [&](auto&& self, std::size_t k, int left, int missing) -> bool {
    if (k == free_atoms.size()) return missing == 0;
    if (++steps > kConstructionStepLimit) return false;
    const auto& atom = atoms[free_atoms[k]];
    const int size = static_cast<int>(atom.members.size());
    std::vector<int> groups = order;
    std::shuffle(groups.begin(), groups.end(), rng);
    for (int g : groups) {
      if (constraints.frozen(g) || sizes[g] + size > bounds.hi) continue;
      const int filled = std::min(size, std::max(0, bounds.lo - sizes[g]));
      if (missing - filled > left - size) continue;
      if (conflicts(atom, g)) continue;
      place(atom, g);
      if (self(self, k + 1, left - size, missing - filled)) return true;
      unplace(atom, g);
      if (steps > kConstructionStepLimit) return false;
    }
    return false;
  };
  if (!dfs(dfs, 0, remaining, deficit())) return std::nullopt;
  return labels;
}

TwoGroupRepair::TwoGroupRepair(const GroupScorer& scorer,
                               const ConstraintIndex& constraints,
                               const CapacityBounds& bounds)
    : scorer_(scorer), constraints_(constraints), bounds_(bounds) {}

std::optional<SplitChoice> TwoGroupRepair::best_split(std::span<const int> members,
                                                      int g1, int g2,
                                                      RepairStats* stats) {
  const int m = static_cast<int>(members.size());
  if (m > kMaxRepairUnion) {
    throw Error(ErrorCode::kInstanceTooLarge,
                fmt::format("two-group union of {} nodes exceeds the repair limit {}",
                            m, kMaxRepairUnion));
  }
  const std::size_t mm = static_cast<std::size_t>(m);
  local_total_.assign(mm * mm, 0.0);
  local_opposite_.assign(mm * mm, 0.0);
  std::vector<double> base_total(mm), base_opposite(mm);
  for (int a = 0; a < m; ++a) {
    base_total[a] = scorer_.base_total(members[a]);
    base_opposite[a] = scorer_.base_opposite(members[a]);
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      local_total_[a * mm + b] = scorer_.delta_total(members[b], members[a]);
      local_opposite_[a * mm + b] = scorer_.delta_opposite(members[b], members[a]);
    }
  }

  const bool constrained = !constraints_.empty();
  std::vector<std::uint64_t> must_mask(mm, 0), cannot_mask(mm, 0);
  std::uint64_t pin1 = 0, pin2 = 0;
  if (constrained) {
    for (int a = 0; a < m; ++a) {
      const int node = members[a];
      if (constraints_.pin(node) == g1) pin1 |= 1ULL << a;
      if (constraints_.pin(node) == g2) pin2 |= 1ULL << a;
      for (int b = 0; b < m; ++b) {
        if (a == b) continue;
        if (std::ranges::binary_search(constraints_.must(node), members[b])) {
          must_mask[a] |= 1ULL << b;
        }
        if (constraints_.cannot_link(node, members[b])) cannot_mask[a] |= 1ULL << b;
      }
    }
  }

  const std::uint64_t full = m == 64 ? ~0ULL : (1ULL << m) - 1;
  auto side_score = [&](std::uint64_t mask) {
    double score = 0.0;
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      const int a = std::countr_zero(bits);
      double total = base_total[a];
      double opposite = base_opposite[a];
      const double* lt = &local_total_[a * mm];
      const double* lo = &local_opposite_[a * mm];
      for (std::uint64_t inner = mask; inner != 0; inner &= inner - 1) {
        const int b = std::countr_zero(inner);
        total += lt[b];
        opposite += lo[b];
      }
      score += scorer_.contribution(members[a], total, opposite);
    }
    return score;
  };
  auto links_ok = [&](std::uint64_t side) {
    const std::uint64_t other = full & ~side;
    for (int a = 0; a < m; ++a) {
      const std::uint64_t own = (side >> a) & 1ULL ? side : other;
      if ((must_mask[a] & ~own) != 0 || (cannot_mask[a] & own) != 0) return false;
    }
    return true;
  };

  std::optional<SplitChoice> best;
  std::int64_t candidates = 0, feasible = 0;
  for (int k = bounds_.lo; k <= bounds_.hi; ++k) {
    const int rest = m - k;
    if (k < 1 || rest < bounds_.lo || rest > bounds_.hi) continue;
    // Sides containing member 0 with k members: choose k - 1 of the others.
    const int choose = k - 1;
    const int pool = m - 1;
    if (choose > pool) continue;
    std::uint64_t sub = choose == 0 ? 0 : (1ULL << choose) - 1;
    const std::uint64_t limit = 1ULL << pool;
    while (sub < limit) {
      const std::uint64_t side = (sub << 1) | 1ULL;
      ++candidates;
      bool ok = true;
      std::uint64_t first = side;
      if (constrained) {
        const std::uint64_t other = full & ~side;
        const bool side_to_g1 = (side & pin2) == 0 && (other & pin1) == 0;
        const bool side_to_g2 = (side & pin1) == 0 && (other & pin2) == 0;
        ok = (side_to_g1 || side_to_g2) && links_ok(side);
        first = side_to_g1 ? side : other;
      }
      if (ok) {
        ++feasible;
        const double score = side_score(side) + side_score(full & ~side);
        if (!best || score > best->score + kScoreEpsilon) best = SplitChoice{first, score};
      }
      if (sub == 0) break;
      // Gosper's hack: next subset with the same popcount.
      const std::uint64_t c = sub & (~sub + 1);
      const std::uint64_t r = sub + c;
      sub = (((r ^ sub) >> 2) / c) | r;
    }
  }
  if (stats != nullptr) {
    stats->candidates += candidates;
    stats->feasible += feasible;
  }
  return best;
}

}  // namespace peergroup::internal
