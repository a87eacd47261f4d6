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

#include "peergroup/app/runner.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup::app {
namespace {

[[noreturn]] void bad(const std::string& message) {
  throw Error(ErrorCode::kBadInput, message);
}

int positive_int(const Json& v, const char* key) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    bad(fmt::format("{} must be a positive integer", key));
  }
  return v.get<int>();
}

}  // namespace

SolveRequest request_from_json(const Json& doc, SolveRequest out) {
  if (!doc.is_object()) bad("solve request must be a JSON object");
  if (auto it = doc.find("algorithm"); it != doc.end()) {
    if (!it->is_string()) bad("algorithm must be a string");
    out.algorithm = parse_algorithm(it->get<std::string>());
  }
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) bad("seed must be a non-negative integer");
    out.seed = it->get<std::uint64_t>();
  }
  if (auto it = doc.find("params"); it != doc.end()) {
    out.params = params_from_json(*it, out.params);
  }
  if (auto it = doc.find("constraints"); it != doc.end()) {
    out.constraints = constraints_from_json(*it);
  }
  if (auto it = doc.find("restarts"); it != doc.end()) out.restarts = positive_int(*it, "restarts");
  if (auto it = doc.find("stall_limit"); it != doc.end()) {
    out.stall_limit = positive_int(*it, "stall_limit");
  }
  if (auto it = doc.find("workers"); it != doc.end()) out.workers = positive_int(*it, "workers");
  if (auto it = doc.find("exact_node_limit"); it != doc.end()) {
    out.exact_node_limit = positive_int(*it, "exact_node_limit");
  }
  if (auto it = doc.find("time_limit"); it != doc.end()) {
    if (!it->is_number()) bad("time_limit must be a number of seconds");
    out.time_limit_seconds = it->get<double>();
  }
  if (auto it = doc.find("absent"); it != doc.end()) {
    if (!it->is_array()) bad("absent must be an array of node ids");
    out.absent.clear();
    for (const Json& id : *it) {
      if (!id.is_string()) bad("absent must be an array of node ids");
      out.absent.push_back(id.get<std::string>());
    }
  }
  if (auto it = doc.find("previous_partition"); it != doc.end()) {
    out.previous = partition_from_json(*it);
  }
  if (auto it = doc.find("pin_others"); it != doc.end()) {
    if (!it->is_boolean()) bad("pin_others must be a boolean");
    out.pin_others = it->get<bool>();
  }
  return out;
}

Json request_to_json(const SolveRequest& request) {
  Json doc = {{"algorithm", std::string(algorithm_name(request.algorithm))},
              {"seed", request.seed},
              {"params", params_to_json(request.params)},
              {"constraints", constraints_to_json(request.constraints)},
              {"restarts", request.restarts},
              {"time_limit", request.time_limit_seconds},
              {"stall_limit", request.stall_limit},
              {"workers", request.workers},
              {"exact_node_limit", request.exact_node_limit},
              {"absent", request.absent},
              {"pin_others", request.pin_others}};
  if (request.previous) doc["previous_partition"] = partition_to_json(*request.previous);
  return doc;
}

SocialNetwork working_network(const SocialNetwork& net,
                              const std::vector<NodeId>& absent) {
  if (absent.empty()) return net;
  const std::set<NodeId> gone(absent.begin(), absent.end());
  SocialNetwork out;
  std::set<NodeId> seen;
  for (const Node& node : net.nodes) {
    if (gone.contains(node.id)) {
      seen.insert(node.id);
    } else {
      out.nodes.push_back(node);
    }
  }
  for (const NodeId& id : gone) {
    if (!seen.contains(id)) bad(fmt::format("absent node '{}' is not in the roster", id));
  }
  for (const Arc& arc : net.arcs) {
    if (!gone.contains(arc.from) && !gone.contains(arc.to)) out.arcs.push_back(arc);
  }
  return out;
}

SolveConstraints effective_constraints(const SocialNetwork& working,
                                       const SolveRequest& request) {
  SolveConstraints constraints = request.constraints;
  if (!request.pin_others) return constraints;
  if (!request.previous) bad("pin_others needs a previous partition");
  for (const Node& node : working.nodes) {
    if (constraints.pinned.contains(node.id)) continue;
    if (auto g = request.previous->group_of(node.id)) constraints.pinned[node.id] = *g;
  }
  return constraints;
}

SolveResult run_solve(const SocialNetwork& net, const SolveRequest& request,
                      std::stop_token stop) {
  const SocialNetwork working = working_network(net, request.absent);
  const SolveConstraints constraints = effective_constraints(working, request);
  switch (request.algorithm) {
    case Algorithm::kExact: {
      ExactConfig config;
      config.node_limit = request.exact_node_limit;
      config.stop = stop;
      SolveResult result = solve_exact(working, request.params, constraints, config);
      result.seed = request.seed;
      return result;
    }
    case Algorithm::kLns:
    case Algorithm::kLocalSearch: {
      LnsConfig config;
      config.restarts = request.restarts;
      config.time_limit = std::chrono::duration<double>(request.time_limit_seconds);
      config.stall_limit = request.stall_limit;
      config.seed = request.seed;
      config.workers = request.workers;
      config.stop = stop;
      return request.algorithm == Algorithm::kLns
                 ? solve_lns(working, request.params, config, constraints)
                 : solve_local_search(working, request.params, config, constraints);
    }
    case Algorithm::kRandom:
    case Algorithm::kNetwork:
    case Algorithm::kEvenUsers:
      if (!constraints.empty()) {
        bad(fmt::format("the {} baseline does not take constraints",
                        algorithm_name(request.algorithm)));
      }
      return solve_baseline(working, request.params, request.algorithm, request.seed);
  }
  bad("unknown algorithm");
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasiblePartition:
    case ErrorCode::kInfeasibleBounds:
    case ErrorCode::kInfeasibleS:
    case ErrorCode::kNoFeasibleSplit:
    case ErrorCode::kInstanceTooLarge:
      return 2;
    case ErrorCode::kBadInput:
    case ErrorCode::kUnnormalizedInput:
    case ErrorCode::kBadDegree:
    case ErrorCode::kTimeBudgetZero:
      return 3;
    case ErrorCode::kUnsatisfiableConstraints:
      return 4;
    default:
      return 1;
  }
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kUnsatisfiableConstraints:
    case ErrorCode::kConflictingUpdate:
    case ErrorCode::kCancelled:
      return 409;
    case ErrorCode::kInfeasiblePartition:
    case ErrorCode::kInfeasibleBounds:
    case ErrorCode::kInfeasibleS:
    case ErrorCode::kNoFeasibleSplit:
    case ErrorCode::kInstanceTooLarge:
      return 422;
    case ErrorCode::kStorageFull:
      return 507;
    case ErrorCode::kSinkUnwritable:
      return 500;
    default:
      return 400;
  }
}

Json error_to_json(ErrorCode code, const std::string& message, const Json& details) {
  return {{"code", std::string(error_code_name(code))},
          {"message", message},
          {"details", details}};
}

}  // namespace peergroup::app
