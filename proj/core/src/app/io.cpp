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

#include "peergroup/app/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "peergroup/error.hpp"

namespace peergroup::app {
namespace {

[[noreturn]] void bad(const std::string& message) {
  throw Error(ErrorCode::kBadInput, message);
}

const Json& field(const Json& doc, const char* key, const char* where) {
  if (!doc.is_object()) bad(fmt::format("{} must be a JSON object", where));
  auto it = doc.find(key);
  if (it == doc.end()) bad(fmt::format("{} is missing \"{}\"", where, key));
  return *it;
}

std::string text(const Json& value, const std::string& where) {
  if (!value.is_string()) bad(fmt::format("{} must be a string", where));
  return value.get<std::string>();
}

int integer(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) bad(fmt::format("{} must be an integer", where));
  return value.get<int>();
}

double real(const Json& value, const std::string& where) {
  if (!value.is_number()) bad(fmt::format("{} must be a number", where));
  return value.get<double>();
}

const Json& array(const Json& value, const std::string& where) {
  if (!value.is_array()) bad(fmt::format("{} must be an array", where));
  return value;
}

Behavior parse_behavior(const std::string& value, const std::string& where) {
  if (value == "user") return Behavior::kUser;
  if (value == "non_user") return Behavior::kNonUser;
  bad(fmt::format("{} must be \"user\" or \"non_user\", got \"{}\"", where, value));
}

TieStrength parse_strength(const std::string& value, const std::string& where) {
  if (value == "strong") return TieStrength::kStrong;
  if (value == "weak") return TieStrength::kWeak;
  bad(fmt::format("{} must be \"strong\" or \"weak\", got \"{}\"", where, value));
}

const char* behavior_name(Behavior b) {
  return b == Behavior::kUser ? "user" : "non_user";
}

std::set<NodePair> pairs_from_json(const Json& doc, const char* key) {
  std::set<NodePair> pairs;
  auto it = doc.find(key);
  if (it == doc.end()) return pairs;
  const Json& list = array(*it, key);
  for (std::size_t t = 0; t < list.size(); ++t) {
    const std::string where = fmt::format("{}[{}]", key, t);
    if (!list[t].is_array() || list[t].size() != 2) {
      bad(fmt::format("{} must be a pair of node ids", where));
    }
    pairs.emplace(text(list[t][0], where), text(list[t][1], where));
  }
  return pairs;
}

Json pairs_to_json(const std::set<NodePair>& pairs) {
  Json list = Json::array();
  for (const NodePair& p : pairs) list.push_back({p.first, p.second});
  return list;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::vector<std::string>> read_csv(std::istream& in, const char* table,
                                               const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool seen_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!seen_header) {
      if (cells != header) {
        bad(fmt::format("{} table header must be \"{}\"", table,
                        fmt::join(header, ",")));
      }
      seen_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      bad(fmt::format("{} table line {} has {} fields, expected {}", table, line_no,
                      cells.size(), header.size()));
    }
    rows.push_back(std::move(cells));
  }
  if (!seen_header) bad(fmt::format("{} table is empty", table));
  return rows;
}

}  // namespace

Json network_to_json(const SocialNetwork& net) {
  Json nodes = Json::array();
  for (const Node& node : net.nodes) {
    nodes.push_back({{"id", node.id}, {"behavior", behavior_name(node.behavior)}});
  }
  Json ties = Json::array();
  for (const Arc& arc : net.arcs) {
    ties.push_back({{"from", arc.from},
                    {"to", arc.to},
                    {"strength", arc.strength == TieStrength::kStrong ? "strong" : "weak"}});
  }
  return {{"nodes", std::move(nodes)}, {"ties", std::move(ties)}};
}

SocialNetwork network_from_json(const Json& doc) {
  SocialNetwork net;
  const Json& nodes = array(field(doc, "nodes", "network"), "network.nodes");
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    const std::string where = fmt::format("nodes[{}]", t);
    net.nodes.push_back(
        {text(field(nodes[t], "id", where.c_str()), where + ".id"),
         parse_behavior(text(field(nodes[t], "behavior", where.c_str()), where + ".behavior"),
                        where + ".behavior")});
  }
  auto ties_it = doc.find("ties");
  if (ties_it != doc.end()) {
    const Json& ties = array(*ties_it, "network.ties");
    for (std::size_t t = 0; t < ties.size(); ++t) {
      const std::string where = fmt::format("ties[{}]", t);
      const Json& tie = ties[t];
      net.arcs.push_back(
          {text(field(tie, "from", where.c_str()), where + ".from"),
           text(field(tie, "to", where.c_str()), where + ".to"),
           parse_strength(text(field(tie, "strength", where.c_str()), where + ".strength"),
                          where + ".strength")});
    }
  }
  return net;
}

Json partition_to_json(const Partition& partition) {
  Json assignment = Json::object();
  for (const auto& [id, group] : partition.assignment()) assignment[id] = group;
  return {{"assignment", std::move(assignment)}};
}

Partition partition_from_json(const Json& doc) {
  if (doc.is_object() && doc.contains("partition")) {
    return partition_from_json(doc["partition"]);
  }
  const Json& assignment = field(doc, "assignment", "partition");
  if (!assignment.is_object()) bad("partition.assignment must be an object");
  std::map<NodeId, int> groups;
  for (const auto& [id, group] : assignment.items()) {
    groups[id] = integer(group, fmt::format("assignment[\"{}\"]", id));
  }
  return Partition(std::move(groups));
}

Json constraints_to_json(const SolveConstraints& constraints) {
  Json pinned = Json::object();
  for (const auto& [id, group] : constraints.pinned) pinned[id] = group;
  return {{"pinned", std::move(pinned)},
          {"must_link", pairs_to_json(constraints.must_link)},
          {"cannot_link", pairs_to_json(constraints.cannot_link)},
          {"frozen_groups", constraints.frozen_groups}};
}

SolveConstraints constraints_from_json(const Json& doc) {
  if (!doc.is_object()) bad("constraints must be a JSON object");
  SolveConstraints out;
  if (auto it = doc.find("pinned"); it != doc.end()) {
    if (!it->is_object()) bad("constraints.pinned must be an object");
    for (const auto& [id, group] : it->items()) {
      out.pinned[id] = integer(group, fmt::format("pinned[\"{}\"]", id));
    }
  }
  out.must_link = pairs_from_json(doc, "must_link");
  out.cannot_link = pairs_from_json(doc, "cannot_link");
  if (auto it = doc.find("frozen_groups"); it != doc.end()) {
    for (const Json& g : array(*it, "frozen_groups")) {
      out.frozen_groups.insert(integer(g, "frozen_groups[]"));
    }
  }
  return out;
}

Json params_to_json(const ModelParams& params) {
  return {{"omega_user_given_non", params.omega_user_given_non},
          {"omega_non_given_user", params.omega_non_given_user},
          {"weight_strong", params.weight_strong},
          {"weight_weak", params.weight_weak},
          {"capacity", {{"lo", params.capacity.lo}, {"hi", params.capacity.hi}}},
          {"include_facilitator", params.include_facilitator}};
}

ModelParams params_from_json(const Json& doc, ModelParams base) {
  if (!doc.is_object()) bad("params must be a JSON object");
  auto number = [&](const char* key, double& target) {
    if (auto it = doc.find(key); it != doc.end()) target = real(*it, key);
  };
  number("omega_user_given_non", base.omega_user_given_non);
  number("omega_non_given_user", base.omega_non_given_user);
  number("weight_strong", base.weight_strong);
  number("weight_weak", base.weight_weak);
  if (auto it = doc.find("capacity"); it != doc.end()) {
    if (!it->is_object()) bad("params.capacity must be an object");
    if (auto lo = it->find("lo"); lo != it->end()) base.capacity.lo = integer(*lo, "capacity.lo");
    if (auto hi = it->find("hi"); hi != it->end()) base.capacity.hi = integer(*hi, "capacity.hi");
  }
  if (auto it = doc.find("include_facilitator"); it != doc.end()) {
    if (!it->is_boolean()) bad("params.include_facilitator must be a boolean");
    base.include_facilitator = it->get<bool>();
  }
  validate_params(base);
  return base;
}

Json flips_to_json(const FlipProfile& flips) {
  Json out = Json::object();
  for (const auto& [id, p] : flips) {
    out[id] = {{"become_user", p.become_user}, {"become_nonuser", p.become_nonuser}};
  }
  return out;
}

Json evaluation_to_json(const Evaluation& evaluation) {
  Json groups = Json::array();
  for (const auto& members : evaluation.partition.groups()) groups.push_back(members);
  return {{"partition", partition_to_json(evaluation.partition)},
          {"groups", std::move(groups)},
          {"expected_nonusers", evaluation.expected_nonusers},
          {"success", evaluation.success},
          {"deviancy_warning", evaluation.deviancy_warning()},
          {"flip_risk", flips_to_json(evaluation.flips)}};
}

Json result_to_json(const SolveResult& result, const ModelParams& params,
                    bool include_timing) {
  Json doc = evaluation_to_json(result.evaluation);
  doc["algorithm"] = std::string(algorithm_name(result.algorithm));
  doc["seed"] = result.seed;
  doc["params"] = params_to_json(params);
  doc["restarts_completed"] = result.restarts_completed;
  Json trace = Json::array();
  for (const TracePoint& p : result.improvement_trace) {
    Json point = {{"restart", p.restart}, {"step", p.step}, {"objective", p.objective}};
    if (include_timing) point["elapsed_seconds"] = p.elapsed_seconds;
    trace.push_back(std::move(point));
  }
  doc["trace"] = std::move(trace);
  if (include_timing) {
    doc["timing"] = {{"wall_seconds", result.wall_time.count()},
                     {"restart_seconds", result.restart_seconds}};
  }
  return doc;
}

SolveResult result_from_json(const Json& doc) {
  SolveResult result;
  try {
    result.partition = partition_from_json(field(doc, "partition", "result"));
    result.algorithm = parse_algorithm(text(field(doc, "algorithm", "result"), "algorithm"));
    const Json& seed = field(doc, "seed", "result");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) bad("seed must be an integer");
    result.seed = seed.get<std::uint64_t>();
    result.restarts_completed =
        integer(field(doc, "restarts_completed", "result"), "restarts_completed");
    Evaluation& ev = result.evaluation;
    ev.partition = result.partition;
    ev.expected_nonusers = real(field(doc, "expected_nonusers", "result"), "expected_nonusers");
    ev.success = real(field(doc, "success", "result"), "success");
    const Json& flips = field(doc, "flip_risk", "result");
    if (!flips.is_object()) bad("flip_risk must be an object");
    for (const auto& [id, p] : flips.items()) {
      ev.flips[id] = {real(field(p, "become_user", "flip_risk"), "become_user"),
                      real(field(p, "become_nonuser", "flip_risk"), "become_nonuser")};
    }
    for (const Json& p : array(field(doc, "trace", "result"), "trace")) {
      TracePoint point;
      point.restart = integer(field(p, "restart", "trace"), "trace.restart");
      point.step = integer(field(p, "step", "trace"), "trace.step");
      point.objective = real(field(p, "objective", "trace"), "trace.objective");
      if (auto it = p.find("elapsed_seconds"); it != p.end()) {
        point.elapsed_seconds = real(*it, "trace.elapsed_seconds");
      }
      result.improvement_trace.push_back(point);
    }
    if (auto it = doc.find("timing"); it != doc.end()) {
      result.wall_time = std::chrono::duration<double>(
          real(field(*it, "wall_seconds", "timing"), "timing.wall_seconds"));
      for (const Json& s : array(field(*it, "restart_seconds", "timing"), "restart_seconds")) {
        result.restart_seconds.push_back(real(s, "restart_seconds[]"));
      }
    }
  } catch (const Json::exception& e) {
    bad(fmt::format("malformed result document: {}", e.what()));
  }
  return result;
}

SocialNetwork network_from_csv(std::istream& nodes, std::istream& ties) {
  SocialNetwork net;
  for (auto& row : read_csv(nodes, "node", {"id", "behavior"})) {
    net.nodes.push_back({row[0], parse_behavior(row[1], "node behavior")});
  }
  for (auto& row : read_csv(ties, "tie", {"from", "to", "strength"})) {
    net.arcs.push_back({row[0], row[1], parse_strength(row[2], "tie strength")});
  }
  return net;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad(fmt::format("cannot read '{}'", path.string()));
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kSinkUnwritable,
                fmt::format("cannot open '{}' for writing", path.string()));
  }
  out << text;
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kSinkUnwritable, fmt::format("failed writing '{}'", path.string()));
  }
}

}  // namespace peergroup::app
