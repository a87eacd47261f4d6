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

// Local roster persistence. Each roster is one JSON document under
// <root>/rosters/<id>.json and each stored result lives under
// <root>/results/<id>/<result id>.json. Every write goes to a temporary file
// that is flushed and then renamed over the target.

#ifndef PEERGROUP_APP_STORE_HPP_
#define PEERGROUP_APP_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peergroup/app/io.hpp"
#include "peergroup/model.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup::app {

struct HistoryEntry {
  std::string result_id;
  Algorithm algorithm = Algorithm::kLns;
  std::uint64_t seed = 0;
  SolveConstraints constraints;
  std::vector<NodeId> absent;

  bool operator==(const HistoryEntry&) const = default;
};

struct Roster {
  std::string id;
  std::string name;
  // Bumped by every update of name or network; history appends leave it.
  std::int64_t version = 1;
  std::string created;  // UTC, ISO 8601
  std::string updated;
  SocialNetwork network;
  std::vector<HistoryEntry> history;

  bool operator==(const Roster&) const = default;
};

struct RosterSummary {
  std::string id;
  std::string name;
  std::int64_t version = 0;
  std::size_t node_count = 0;
  std::size_t user_count = 0;
  std::size_t result_count = 0;
  std::string updated;
};

Json roster_to_json(const Roster& roster);
Roster roster_from_json(const Json& doc);
Json summary_to_json(const RosterSummary& summary);

// Called at "write" (temporary file open, nothing written) and "rename"
// (temporary file complete, target untouched). Throwing aborts the write,
// which is how tests simulate a crash.
using FaultHook = std::function<void(std::string_view stage,
                                     const std::filesystem::path& target)>;

// Writes everything or throws: Error(kStorageFull) on ENOSPC/EDQUOT,
// Error(kSinkUnwritable) on other failures.
void write_all(int fd, std::string_view data);

// Temporary file + fsync + rename. The previous contents of `target` stay
// intact unless the rename happens.
void write_file_atomic(const std::filesystem::path& target, std::string_view data,
                       const FaultHook& hook = {});

class RosterStore {
 public:
  explicit RosterStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Throws Error(kBadInput) when the network does not validate.
  Roster create(const std::string& name, const SocialNetwork& network);
  // Throws Error(kNotFound).
  Roster get(std::string_view id) const;
  std::vector<RosterSummary> list() const;
  // Optimistic update: throws Error(kConflictingUpdate) unless
  // expected_version is the stored version.
  Roster update(std::string_view id, std::int64_t expected_version,
                std::optional<std::string> name,
                std::optional<SocialNetwork> network);
  void remove(std::string_view id);

  // Stores the result document and appends to the roster history. Returns
  // the new result id.
  std::string add_result(std::string_view id, const Json& result, HistoryEntry entry);
  Json get_result(std::string_view id, std::string_view result_id) const;

  void set_fault_hook(FaultHook hook);

 private:
  std::filesystem::path roster_path(std::string_view id) const;
  std::filesystem::path result_dir(std::string_view id) const;
  std::mutex& lock_for(std::string_view id) const;
  Roster load(std::string_view id) const;
  void save(const Roster& roster) const;

  std::filesystem::path root_;
  FaultHook hook_;
  mutable std::mutex locks_guard_;
  mutable std::map<std::string, std::unique_ptr<std::mutex>, std::less<>> locks_;
};

}  // namespace peergroup::app

#endif  // PEERGROUP_APP_STORE_HPP_
