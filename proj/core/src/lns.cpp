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

// Large neighborhood search (destroy two groups, re-partition their union
// optimally) and swap hill climbing. Both share the restart driver: restart r
// draws its group count from a seeded rotation over the feasible counts and
// its randomness from derive_seed(seed, r), so results do not depend on the
// number of workers.

#include <algorithm>
#include <functional>
#include <thread>

#include <fmt/format.h>

#include "peergroup/error.hpp"
#include "peergroup/random.hpp"
#include "peergroup/solvers.hpp"
#include "search_support.hpp"
#include "solver_common.hpp"

namespace peergroup {
namespace {

using internal::Clock;
using internal::ConstraintIndex;
using internal::GroupScorer;

constexpr double kImprovement = 1e-12;
constexpr std::uint64_t kRotationStream = 0x5eed0f5ULL;

struct RestartOutcome {
  std::vector<int> labels;
  double objective = 0.0;
  std::vector<TracePoint> trace;
  double seconds = 0.0;
  bool ran = false;
};

struct SearchContext {
  const IndexedNetwork& net;
  const ModelParams& params;
  const ConstraintIndex& links;
  const GroupScorer& scorer;
  const LnsConfig& config;
  std::vector<int> rotation;
  double share_seconds = 0.0;
};

// Group counts for which a constrained construction exists, in seeded order.
std::vector<int> group_rotation(const IndexedNetwork& net, const ConstraintIndex& links,
                                const CapacityBounds& bounds, std::uint64_t seed) {
  std::vector<int> counts = links.candidate_group_counts(net.size(), bounds);
  if (!links.empty()) {
    Rng probe(derive_seed(seed, kRotationStream + 1));
    std::erase_if(counts, [&](int s) {
      return !internal::random_feasible_labels(net, links, bounds, s, probe);
    });
  }
  if (counts.empty()) {
    throw Error(ErrorCode::kUnsatisfiableConstraints,
                "no group count admits a partition honoring the constraints");
  }
  Rng rng(derive_seed(seed, kRotationStream));
  std::shuffle(counts.begin(), counts.end(), rng);
  return counts;
}

class GroupState {
 public:
  GroupState(const GroupScorer& scorer, std::vector<int> labels)
      : scorer_(scorer), labels_(std::move(labels)) {
    members_ = internal::members_by_label(labels_);
    scores_.reserve(members_.size());
    for (const auto& m : members_) scores_.push_back(scorer_.group_score(m));
    for (double s : scores_) objective_ += s;
  }

  int group_count() const { return static_cast<int>(members_.size()); }
  const std::vector<int>& labels() const { return labels_; }
  int label(int i) const { return labels_[i]; }
  const std::vector<int>& members(int g) const { return members_[g]; }
  double score(int g) const { return scores_[g]; }
  double objective() const { return objective_; }

  void replace(int g1, std::vector<int> first, int g2, std::vector<int> second) {
    for (int i : first) labels_[i] = g1;
    for (int i : second) labels_[i] = g2;
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    members_[g1] = std::move(first);
    members_[g2] = std::move(second);
    const double old = scores_[g1] + scores_[g2];
    scores_[g1] = scorer_.group_score(members_[g1]);
    scores_[g2] = scorer_.group_score(members_[g2]);
    objective_ += scores_[g1] + scores_[g2] - old;
  }

 private:
  const GroupScorer& scorer_;
  std::vector<int> labels_;
  std::vector<std::vector<int>> members_;
  std::vector<double> scores_;
  double objective_ = 0.0;
};

using RestartBody = std::function<void(GroupState&, Rng&, RestartOutcome&,
                                       Clock::time_point, int)>;

RestartOutcome run_restart(const SearchContext& ctx, int restart,
                           const RestartBody& body) {
  RestartOutcome out;
  const auto start = Clock::now();
  Rng rng(derive_seed(ctx.config.seed, static_cast<std::uint64_t>(restart)));
  const int groups = ctx.rotation[restart % ctx.rotation.size()];
  auto labels = internal::random_feasible_labels(ctx.net, ctx.links,
                                                 ctx.params.capacity, groups, rng);
  if (!labels) {
    out.seconds = internal::seconds_since(start);
    return out;
  }
  GroupState state(ctx.scorer, std::move(*labels));
  out.trace.push_back({restart, 0, 0.0, state.objective()});
  body(state, rng, out, start, restart);
  out.labels = state.labels();
  out.objective = internal::objective_of(ctx.scorer, out.labels);
  out.seconds = internal::seconds_since(start);
  out.ran = true;
  return out;
}

SolveResult drive(const SocialNetwork& net, const ModelParams& params,
                  const LnsConfig& config, const SolveConstraints& constraints,
                  Algorithm algorithm, const std::function<RestartBody(
                      const SearchContext&)>& make_body) {
  const auto start = Clock::now();
  validate_params(params);
  if (config.restarts < 1 || config.stall_limit < 1) {
    throw Error(ErrorCode::kBadInput, "restarts and stall_limit must be positive");
  }
  if (!(config.time_limit.count() > 0.0)) {
    throw Error(ErrorCode::kTimeBudgetZero, "time limit must be positive");
  }
  const IndexedNetwork indexed(net);
  internal::require_feasible(indexed.size(), params.capacity);
  const ConstraintIndex links(indexed, constraints, params.capacity);
  const GroupScorer scorer(indexed, params);
  SearchContext ctx{indexed, params, links, scorer, config,
                    group_rotation(indexed, links, params.capacity, config.seed),
                    config.time_limit.count() / config.restarts};
  const RestartBody body = make_body(ctx);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  const int workers = std::clamp(config.workers, 1, config.restarts);
  if (workers == 1) {
    for (int r = 0; r < config.restarts; ++r) {
      internal::throw_if_stopped(config.stop);
      outcomes[r] = run_restart(ctx, r, body);
    }
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (int r = w; r < config.restarts; r += workers) {
            internal::throw_if_stopped(config.stop);
            outcomes[r] = run_restart(ctx, r, body);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const RestartOutcome* best = nullptr;
  std::vector<int> best_canonical;
  SolveResult result;
  for (const RestartOutcome& outcome : outcomes) {
    result.restart_seconds.push_back(outcome.seconds);
    if (!outcome.ran) continue;
    ++result.restarts_completed;
    result.improvement_trace.insert(result.improvement_trace.end(),
                                    outcome.trace.begin(), outcome.trace.end());
    std::vector<int> canonical = canonical_labels(outcome.labels);
    if (best == nullptr || outcome.objective > best->objective + kImprovement ||
        (outcome.objective >= best->objective - kImprovement &&
         canonical < best_canonical)) {
      best = &outcome;
      best_canonical = std::move(canonical);
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kUnsatisfiableConstraints,
                "no restart found a partition honoring the constraints");
  }
  SolveResult built = internal::make_result(
      net, indexed, params, internal::output_labels(best->labels, links), algorithm,
      config.seed, start);
  built.restarts_completed = result.restarts_completed;
  built.improvement_trace = std::move(result.improvement_trace);
  built.restart_seconds = std::move(result.restart_seconds);
  return built;
}

bool out_of_time(Clock::time_point start, double share) {
  return internal::seconds_since(start) >= share;
}

}  // namespace

SolveResult solve_lns(const SocialNetwork& net, const ModelParams& params,
                      const LnsConfig& config, const SolveConstraints& constraints) {
  return drive(net, params, config, constraints, Algorithm::kLns,
               [](const SearchContext& ctx) -> RestartBody {
    return [&ctx](GroupState& state, Rng& rng, RestartOutcome& out,
                  Clock::time_point start, int restart) {
      std::vector<int> eligible;
      for (int g = 0; g < state.group_count(); ++g) {
        if (!ctx.links.frozen(g)) eligible.push_back(g);
      }
      const int k = static_cast<int>(eligible.size());
      if (k < 2) return;
      // clean[a * k + b]: pair known not to improve since either group last
      // changed. Re-repairing it would return the same split.
      std::vector<char> clean(static_cast<std::size_t>(k) * k, 0);
      int clean_pairs = 0;
      const int pair_count = k * (k - 1) / 2;
      internal::TwoGroupRepair repair(ctx.scorer, ctx.links, ctx.params.capacity);
      std::uniform_int_distribution<int> first_pick(0, k - 1);
      std::uniform_int_distribution<int> second_pick(0, k - 2);
      int stall = 0;
      int step = 0;
      std::vector<int> pool;
      while (stall < ctx.config.stall_limit && clean_pairs < pair_count) {
        if (out_of_time(start, ctx.share_seconds)) break;
        internal::throw_if_stopped(ctx.config.stop);
        ++step;
        int a = first_pick(rng);
        int b = second_pick(rng);
        if (b >= a) ++b;
        if (a > b) std::swap(a, b);
        char& pair_clean = clean[a * k + b];
        if (pair_clean) {
          ++stall;
          continue;
        }
        const int g1 = eligible[a];
        const int g2 = eligible[b];
        pool = state.members(g1);
        pool.insert(pool.end(), state.members(g2).begin(), state.members(g2).end());
        std::sort(pool.begin(), pool.end());
        auto split = repair.best_split(pool, g1, g2);
        const double current = state.score(g1) + state.score(g2);
        if (!split || !(split->score > current + kImprovement)) {
          pair_clean = 1;
          ++clean_pairs;
          ++stall;
          continue;
        }
        std::vector<int> first, second;
        for (int t = 0; t < static_cast<int>(pool.size()); ++t) {
          ((split->first_side >> t) & 1ULL ? first : second).push_back(pool[t]);
        }
        const double before = state.objective();
        state.replace(g1, std::move(first), g2, std::move(second));
        if (!(state.objective() > before)) {
          // Rounding ate the gain; treat as a stall to keep the trace monotone.
          pair_clean = 1;
          ++clean_pairs;
          ++stall;
          continue;
        }
        stall = 0;
        for (int o = 0; o < k; ++o) {
          for (int changed : {a, b}) {
            if (o == changed) continue;
            char& c = clean[std::min(o, changed) * k + std::max(o, changed)];
            if (c) {
              c = 0;
              --clean_pairs;
            }
          }
        }
        out.trace.push_back(
            {restart, step, internal::seconds_since(start), state.objective()});
      }
    };
  });
}

SolveResult solve_local_search(const SocialNetwork& net, const ModelParams& params,
                               const LnsConfig& config,
                               const SolveConstraints& constraints) {
  return drive(net, params, config, constraints, Algorithm::kLocalSearch,
               [](const SearchContext& ctx) -> RestartBody {
    return [&ctx](GroupState& state, Rng& rng, RestartOutcome& out,
                  Clock::time_point start, int restart) {
      const int n = ctx.net.size();
      if (state.group_count() < 2) return;
      const ConstraintIndex& links = ctx.links;
      auto movable = [&](int node, int to_group, int partner) {
        if (links.pin(node) >= 0 || !links.must(node).empty()) return false;
        if (links.frozen(state.label(node)) || links.frozen(to_group)) return false;
        for (int c : links.cannot(node)) {
          if (c != partner && state.label(c) == to_group) return false;
        }
        return true;
      };
      std::uniform_int_distribution<int> pick(0, n - 1);
      std::vector<int> first, second;
      int stall = 0;
      int step = 0;
      while (stall < ctx.config.stall_limit) {
        if (out_of_time(start, ctx.share_seconds)) break;
        internal::throw_if_stopped(ctx.config.stop);
        ++step;
        const int a = pick(rng);
        int b = pick(rng);
        while (state.label(b) == state.label(a)) b = pick(rng);
        const int g1 = state.label(a);
        const int g2 = state.label(b);
        if (!links.empty() && (!movable(a, g2, b) || !movable(b, g1, a))) {
          ++stall;
          continue;
        }
        first = state.members(g1);
        second = state.members(g2);
        std::replace(first.begin(), first.end(), a, b);
        std::replace(second.begin(), second.end(), b, a);
        std::sort(first.begin(), first.end());
        std::sort(second.begin(), second.end());
        const double gain = ctx.scorer.group_score(first) +
                            ctx.scorer.group_score(second) - state.score(g1) -
                            state.score(g2);
        if (!(gain > kImprovement)) {
          ++stall;
          continue;
        }
        const double before = state.objective();
        state.replace(g1, first, g2, second);
        if (!(state.objective() > before)) {
          ++stall;
          continue;
        }
        stall = 0;
        out.trace.push_back(
            {restart, step, internal::seconds_since(start), state.objective()});
      }
    };
  });
}

Partition repair_two_groups(const SocialNetwork& net, const ModelParams& params,
                            const Partition& partition, int g1, int g2,
                            const SolveConstraints& constraints, RepairStats* stats) {
  validate_params(params);
  if (g1 == g2) throw Error(ErrorCode::kBadInput, "repair needs two distinct groups");
  const IndexedNetwork indexed(net);
  std::vector<int> labels = indexed.dense_assignment(partition);
  const ConstraintIndex links(indexed, constraints, params.capacity);
  if (links.frozen(g1) || links.frozen(g2)) {
    throw Error(ErrorCode::kNoFeasibleSplit, "frozen groups cannot be repaired");
  }
  std::vector<int> pool;
  for (int i = 0; i < indexed.size(); ++i) {
    if (labels[i] == g1 || labels[i] == g2) pool.push_back(i);
  }
  const GroupScorer scorer(indexed, params);
  internal::TwoGroupRepair repair(scorer, links, params.capacity);
  auto split = repair.best_split(pool, g1, g2, stats);
  if (!split) {
    throw Error(ErrorCode::kNoFeasibleSplit,
                fmt::format("no split of groups {} and {} honors bounds and "
                            "constraints",
                            g1, g2));
  }
  for (int t = 0; t < static_cast<int>(pool.size()); ++t) {
    labels[pool[t]] = (split->first_side >> t) & 1ULL ? g1 : g2;
  }
  return indexed.to_partition(labels);
}

}  // namespace peergroup
