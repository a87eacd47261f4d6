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

// Single-stage competitive threshold process over a WeightedNetwork.
//
// Every original node j draws a threshold T_j ~ U[0, 1]. Its threshold is
// exceeded when the normalized weight it receives from the opposite behavior
// is at least T_j; an exceeded non-user then turns user with probability
// omega_user_given_non and an exceeded user quits with probability
// omega_non_given_user. Because thresholds are uniform and the opposite
// weight never exceeds 1, P(exceeded) equals the opposite weight itself,
// which gives the closed form used by the optimizers.

#ifndef PEERGROUP_INFLUENCE_HPP_
#define PEERGROUP_INFLUENCE_HPP_

#include <cstdint>
#include <map>

#include "peergroup/dynamics.hpp"
#include "peergroup/model.hpp"

namespace peergroup {

struct FlipProbability {
  double become_user = 0.0;
  double become_nonuser = 0.0;

  bool operator==(const FlipProbability&) const = default;
};

// Original (non-facilitator) nodes only.
using FlipProfile = std::map<NodeId, FlipProbability>;

struct Evaluation {
  double expected_nonusers = 0.0;
  double success = 0.0;
  FlipProfile flips;
  Partition partition;

  // Negative success means the grouping is expected to make things worse.
  bool deviancy_warning() const { return success < 0.0; }
};

// Throws Error(kUnnormalizedInput) when some target's incoming weights do not
// sum to 0 or 1 (within 1e-9).
double expected_nonusers(const WeightedNetwork& wnet, const ModelParams& params);

FlipProfile flip_profile(const WeightedNetwork& wnet, const ModelParams& params);

// (expected - pre_nonusers) / (omega_non_given_user * pre_users); 0 when the
// network has no users.
double success(const SocialNetwork& net, double expected_post,
               const ModelParams& params);
double success(int user_count, int node_count, double expected_post,
               const ModelParams& params);
// Same quantity computed from the opposite-behavior weights, which avoids
// subtracting the two node-count sized totals.
double success(const WeightedNetwork& wnet, const ModelParams& params);

struct SimulationResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Monte Carlo estimate of the expected number of non-users. Samples are
// processed in fixed-size blocks with seeds derived from (seed, block), so
// the result does not depend on `workers`.
SimulationResult simulate(const WeightedNetwork& wnet, const ModelParams& params,
                          std::int64_t sample_count, std::uint64_t seed,
                          int workers = 1);

}  // namespace peergroup

#endif  // PEERGROUP_INFLUENCE_HPP_
