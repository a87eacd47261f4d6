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

// One solve request as understood by both the command line tool and the HTTP
// API, so identical requests yield identical results on either path.

#ifndef PEERGROUP_APP_RUNNER_HPP_
#define PEERGROUP_APP_RUNNER_HPP_

#include <cstdint>
#include <optional>
#include <stop_token>
#include <vector>

#include "peergroup/app/io.hpp"
#include "peergroup/error.hpp"
#include "peergroup/model.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup::app {

struct SolveRequest {
  Algorithm algorithm = Algorithm::kLns;
  ModelParams params;
  SolveConstraints constraints;
  std::uint64_t seed = 0;
  int restarts = 50;
  double time_limit_seconds = 3600.0;
  int stall_limit = 200;
  int workers = 1;
  int exact_node_limit = 12;
  // No-shows: removed from the working network before solving.
  std::vector<NodeId> absent;
  // With pin_others, every remaining node assigned in `previous` is pinned
  // to its group there (explicit pins win).
  std::optional<Partition> previous;
  bool pin_others = false;
};

// Fields: algorithm, seed, params, constraints, restarts, time_limit,
// stall_limit, workers, exact_node_limit, absent, previous_partition,
// pin_others. All optional; missing ones keep the values in `defaults`.
SolveRequest request_from_json(const Json& doc, SolveRequest defaults = {});
Json request_to_json(const SolveRequest& request);

// Network without the absent nodes and their ties. Throws Error(kBadInput)
// for ids that are not in the network.
SocialNetwork working_network(const SocialNetwork& net,
                              const std::vector<NodeId>& absent);

// Effective constraints after pin_others is applied to the working network.
SolveConstraints effective_constraints(const SocialNetwork& working,
                                       const SolveRequest& request);

// Baselines reject side constraints with Error(kBadInput).
SolveResult run_solve(const SocialNetwork& net, const SolveRequest& request,
                      std::stop_token stop = {});

// Process exit status for an error code: 2 infeasible instance, 3 bad input,
// 4 constraint conflict, 1 otherwise.
int exit_status(ErrorCode code);
// HTTP status for an error code.
int http_status(ErrorCode code);
Json error_to_json(ErrorCode code, const std::string& message,
                   const Json& details = Json::object());

}  // namespace peergroup::app

#endif  // PEERGROUP_APP_RUNNER_HPP_
