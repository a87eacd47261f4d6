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

// JSON and CSV file formats shared by the command line tool and the HTTP API.
//
// Network:     {"nodes": [{"id", "behavior": "user" | "non_user"}],
//               "ties":  [{"from", "to", "strength": "strong" | "weak"}]}
// Partition:   {"assignment": {"<id>": group, ...}}
// Constraints: {"pinned": {"<id>": group}, "must_link": [["a", "b"]],
//               "cannot_link": [["a", "b"]], "frozen_groups": [g]}
// Params:      every field optional, missing ones keep their defaults.
//
// Parsers throw Error(kBadInput) naming the offending field.

#ifndef PEERGROUP_APP_IO_HPP_
#define PEERGROUP_APP_IO_HPP_

#include <filesystem>
#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "peergroup/influence.hpp"
#include "peergroup/model.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup::app {

using Json = nlohmann::json;

Json network_to_json(const SocialNetwork& net);
SocialNetwork network_from_json(const Json& doc);

Json partition_to_json(const Partition& partition);
// Accepts a partition document or any document carrying one under
// "partition" (such as a result file).
Partition partition_from_json(const Json& doc);

Json constraints_to_json(const SolveConstraints& constraints);
SolveConstraints constraints_from_json(const Json& doc);

Json params_to_json(const ModelParams& params);
ModelParams params_from_json(const Json& doc, ModelParams base = {});

Json flips_to_json(const FlipProfile& flips);
Json evaluation_to_json(const Evaluation& evaluation);

// Timing fields (wall time, per-restart seconds, trace timestamps) are
// written only when include_timing is set, so repeated seeded runs produce
// identical documents.
Json result_to_json(const SolveResult& result, const ModelParams& params,
                    bool include_timing = false);
SolveResult result_from_json(const Json& doc);

// Spreadsheet import: a node table with columns id,behavior and a tie table
// with columns from,to,strength. Header rows are required; blank lines are
// skipped; fields are trimmed.
SocialNetwork network_from_csv(std::istream& nodes, std::istream& ties);

Json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
std::string dump_json(const Json& doc);
// Throws Error(kSinkUnwritable).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace peergroup::app

#endif  // PEERGROUP_APP_IO_HPP_
