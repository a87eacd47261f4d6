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

#include "peergroup/influence.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "peergroup/error.hpp"
#include "peergroup/random.hpp"

namespace peergroup {
namespace {

constexpr double kNormalizationTolerance = 1e-9;
constexpr std::int64_t kSamplesPerBlock = 4096;

// Opposite-behavior incoming weight per original node, after checking that
// each target is normalized.
std::vector<double> opposite_weights(const WeightedNetwork& wnet) {
  std::vector<double> out;
  for (int j = 0; j < wnet.size(); ++j) {
    const WeightedNode& target = wnet.node(j);
    if (target.is_facilitator) continue;
    double total = 0.0;
    double opposite = 0.0;
    for (const InfluenceArc& arc : wnet.incoming(j)) {
      total += arc.weight;
      if (wnet.node(arc.from).behavior != target.behavior) opposite += arc.weight;
    }
    if (std::abs(total) > kNormalizationTolerance &&
        std::abs(total - 1.0) > kNormalizationTolerance) {
      throw Error(ErrorCode::kUnnormalizedInput,
                  fmt::format("incoming weights of '{}' sum to {}", target.id, total));
    }
    // Float drift only; normalized inputs never leave [0, 1].
    out.push_back(std::clamp(opposite, 0.0, 1.0));
  }
  return out;
}

std::vector<Behavior> original_behaviors(const WeightedNetwork& wnet) {
  std::vector<Behavior> out;
  for (const WeightedNode& node : wnet.nodes()) {
    if (!node.is_facilitator) out.push_back(node.behavior);
  }
  return out;
}

struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    count += other.count;
  }
};

}  // namespace

double expected_nonusers(const WeightedNetwork& wnet, const ModelParams& params) {
  const std::vector<double> opposite = opposite_weights(wnet);
  const std::vector<Behavior> behaviors = original_behaviors(wnet);
  double total = 0.0;
  for (std::size_t j = 0; j < opposite.size(); ++j) {
    if (behaviors[j] == Behavior::kNonUser) {
      total += 1.0 - params.omega_user_given_non * opposite[j];
    } else {
      total += params.omega_non_given_user * opposite[j];
    }
  }
  return total;
}

FlipProfile flip_profile(const WeightedNetwork& wnet, const ModelParams& params) {
  const std::vector<double> opposite = opposite_weights(wnet);
  FlipProfile out;
  std::size_t k = 0;
  for (const WeightedNode& node : wnet.nodes()) {
    if (node.is_facilitator) continue;
    FlipProbability p;
    if (node.behavior == Behavior::kNonUser) {
      p.become_user = params.omega_user_given_non * opposite[k];
    } else {
      p.become_nonuser = params.omega_non_given_user * opposite[k];
    }
    out.emplace(node.id, p);
    ++k;
  }
  return out;
}

double success(const SocialNetwork& net, double expected_post,
               const ModelParams& params) {
  return success(static_cast<int>(net.user_count()),
                 static_cast<int>(net.nodes.size()), expected_post, params);
}

double success(int user_count, int node_count, double expected_post,
               const ModelParams& params) {
  if (user_count == 0) return 0.0;
  const double pre_nonusers = static_cast<double>(node_count - user_count);
  const double denom = params.omega_non_given_user * static_cast<double>(user_count);
  if (denom == 0.0) return 0.0;
  return (expected_post - pre_nonusers) / denom;
}

double success(const WeightedNetwork& wnet, const ModelParams& params) {
  if (params.omega_non_given_user == 0.0) return 0.0;
  const std::vector<double> opposite = opposite_weights(wnet);
  const std::vector<Behavior> behaviors = original_behaviors(wnet);
  // expected - pre = omega_nu * sum_users w - omega_un * sum_nonusers w.
  double quit = 0.0;
  double start = 0.0;
  int users = 0;
  for (std::size_t j = 0; j < opposite.size(); ++j) {
    if (behaviors[j] == Behavior::kUser) {
      quit += opposite[j];
      ++users;
    } else {
      start += opposite[j];
    }
  }
  if (users == 0) return 0.0;
  const double ratio = params.omega_user_given_non / params.omega_non_given_user;
  return (quit - ratio * start) / static_cast<double>(users);
}

SimulationResult simulate(const WeightedNetwork& wnet, const ModelParams& params,
                          std::int64_t sample_count, std::uint64_t seed,
                          int workers) {
  if (sample_count < 1) {
    throw Error(ErrorCode::kBadInput, "sample_count must be positive");
  }
  const std::vector<double> opposite = opposite_weights(wnet);
  const std::vector<Behavior> behaviors = original_behaviors(wnet);
  const std::int64_t block_count =
      (sample_count + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<RunningStats> blocks(static_cast<std::size_t>(block_count));

  auto run_block = [&](std::int64_t b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::int64_t begin = b * kSamplesPerBlock;
    const std::int64_t end = std::min(sample_count, begin + kSamplesPerBlock);
    RunningStats stats;
    for (std::int64_t s = begin; s < end; ++s) {
      int nonusers = 0;
      for (std::size_t j = 0; j < opposite.size(); ++j) {
        const bool is_user = behaviors[j] == Behavior::kUser;
        bool flips = false;
        // Nodes with no opposite weight can never reach their threshold.
        if (opposite[j] > 0.0) {
          const double threshold = unit(rng);
          if (opposite[j] >= threshold) {
            const double omega = is_user ? params.omega_non_given_user
                                         : params.omega_user_given_non;
            flips = unit(rng) < omega;
          }
        }
        if (is_user == flips) ++nonusers;
      }
      stats.add(static_cast<double>(nonusers));
    }
    blocks[static_cast<std::size_t>(b)] = stats;
  };

  const int thread_count =
      static_cast<int>(std::clamp<std::int64_t>(workers, 1, block_count));
  if (thread_count == 1) {
    for (std::int64_t b = 0; b < block_count; ++b) run_block(b);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < thread_count; ++t) {
      threads.emplace_back([&, t] {
        for (std::int64_t b = t; b < block_count; b += thread_count) run_block(b);
      });
    }
    for (auto& thread : threads) thread.join();
  }

  RunningStats total;
  for (const RunningStats& block : blocks) total.merge(block);
  SimulationResult result;
  result.samples = total.count;
  result.mean = total.mean;
  if (total.count > 1) {
    const double variance = total.m2 / static_cast<double>(total.count - 1);
    result.std_error = std::sqrt(std::max(variance, 0.0) /
                                 static_cast<double>(total.count));
  }
  return result;
}

}  // namespace peergroup
