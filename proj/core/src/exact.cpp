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

// Exhaustive search over set partitions, generated as restricted growth
// strings so every partition is visited once, in lexicographic order of its
// canonical labelling.

#include <algorithm>
#include <optional>

#include <fmt/format.h>

#include "peergroup/error.hpp"
#include "peergroup/solvers.hpp"
#include "search_support.hpp"
#include "solver_common.hpp"

namespace peergroup {

using internal::Clock;

SolveResult solve_exact(const SocialNetwork& net, const ModelParams& params,
                        const SolveConstraints& constraints,
                        const ExactConfig& config) {
  const auto start = Clock::now();
  validate_params(params);
  const IndexedNetwork indexed(net);
  const int n = indexed.size();
  if (n > config.node_limit) {
    throw Error(ErrorCode::kInstanceTooLarge,
                fmt::format("exact search supports at most {} nodes, got {}",
                            config.node_limit, n));
  }
  const CapacityBounds bounds = params.capacity;
  internal::require_feasible(n, bounds);
  const internal::ConstraintIndex links(indexed, constraints, bounds);
  const std::vector<int> counts = links.candidate_group_counts(n, bounds);
  if (counts.empty()) {
    throw Error(ErrorCode::kUnsatisfiableConstraints,
                "pinned group indices exceed every feasible group count");
  }
  const int max_groups = counts.back();
  const internal::GroupScorer scorer(indexed, params);

  std::vector<int> rgs(static_cast<std::size_t>(n), -1);
  std::vector<int> sizes;
  std::vector<int> mapped(static_cast<std::size_t>(n), -1);
  std::optional<std::vector<int>> best_labels;
  double best_score = 0.0;
  int best_groups = 0;
  std::int64_t leaves = 0;

  // Maps blocks to labels honoring pins; false if pins/frozen groups cannot
  // be met by this block structure.
  auto map_labels = [&](int block_count) {
    std::vector<int> label_of(static_cast<std::size_t>(block_count), -1);
    std::vector<char> used(static_cast<std::size_t>(block_count), 0);
    for (int i = 0; i < n; ++i) {
      const int pin = links.pin(i);
      if (pin < 0) continue;
      if (pin >= block_count) return false;
      int& label = label_of[rgs[i]];
      if (label >= 0 && label != pin) return false;
      label = pin;
    }
    for (int b = 0; b < block_count; ++b) {
      if (label_of[b] < 0) continue;
      if (used[label_of[b]]) return false;
      used[label_of[b]] = 1;
    }
    int next = 0;
    for (int b = 0; b < block_count; ++b) {
      if (label_of[b] >= 0) continue;
      while (used[next]) ++next;
      label_of[b] = next;
      used[next] = 1;
    }
    for (int i = 0; i < n; ++i) mapped[i] = label_of[rgs[i]];
    for (int i = 0; i < n; ++i) {
      if (links.frozen(mapped[i]) && links.pin(i) != mapped[i]) return false;
    }
    return true;
  };

  auto leaf = [&](int block_count) {
    if ((++leaves & 0xfff) == 0) internal::throw_if_stopped(config.stop);
    if (!links.empty() && !map_labels(block_count)) return;
    double score = 0.0;
    for (const auto& members : internal::members_by_label(rgs)) {
      score += scorer.group_score(members);
    }
    const bool better = !best_labels || score > best_score + 1e-12 ||
                        (score >= best_score - 1e-12 && block_count < best_groups);
    if (better) {
      best_score = score;
      best_groups = block_count;
      best_labels = links.empty() ? rgs : mapped;
    }
  };

  auto dfs = [&](auto&& self, int i, int missing) -> void {
    if (i == n) {
      if (missing == 0) leaf(static_cast<int>(sizes.size()));
      return;
    }
    const int after = n - i - 1;
    const int blocks = static_cast<int>(sizes.size());
    for (int label = 0; label <= blocks; ++label) {
      const bool fresh = label == blocks;
      if (fresh && blocks >= max_groups) break;
      const int size = fresh ? 0 : sizes[label];
      if (size + 1 > bounds.hi) continue;
      const int next_missing =
          fresh ? missing + std::max(0, bounds.lo - 1)
                : missing - (size < bounds.lo ? 1 : 0);
      if (next_missing > after) continue;
      bool ok = true;
      for (int c : links.must(i)) {
        if (c < i && rgs[c] != label) ok = false;
      }
      for (int c : links.cannot(i)) {
        if (c < i && rgs[c] == label) ok = false;
      }
      if (!ok) continue;
      rgs[i] = label;
      if (fresh) {
        sizes.push_back(1);
      } else {
        ++sizes[label];
      }
      self(self, i + 1, next_missing);
      if (fresh) {
        sizes.pop_back();
      } else {
        --sizes[label];
      }
      rgs[i] = -1;
    }
  };
  dfs(dfs, 0, 0);

  if (!best_labels) {
    throw Error(ErrorCode::kUnsatisfiableConstraints,
                "no partition satisfies the capacity bounds and constraints");
  }
  SolveResult result = internal::make_result(net, indexed, params, *best_labels,
                                             Algorithm::kExact, 0, start);
  result.restarts_completed = 1;
  result.improvement_trace.push_back(
      {0, 0, internal::seconds_since(start), result.evaluation.expected_nonusers});
  return result;
}

}  // namespace peergroup
