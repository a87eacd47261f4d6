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

#include "peergroup/app/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <random>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "peergroup/error.hpp"
#include "peergroup/random.hpp"

namespace peergroup::app {
namespace fs = std::filesystem;
namespace {

bool valid_id(std::string_view id) {
  return !id.empty() && id.size() <= 64 &&
         std::all_of(id.begin(), id.end(), [](unsigned char c) {
           return std::isalnum(c) != 0 || c == '-' || c == '_';
         });
}

[[noreturn]] void not_found(std::string_view what, std::string_view id) {
  throw Error(ErrorCode::kNotFound, fmt::format("{} '{}' not found", what, id));
}

std::string now_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::string new_roster_id() {
  static std::mutex mutex;
  static Rng rng(std::random_device{}());
  std::lock_guard lock(mutex);
  return fmt::format("r{:012x}", rng() & 0xffffffffffffULL);
}

[[noreturn]] void io_failure(int err, const std::string& what) {
  if (err == ENOSPC || err == EDQUOT) {
    throw Error(ErrorCode::kStorageFull, fmt::format("{}: {}", what, std::strerror(err)));
  }
  throw Error(ErrorCode::kSinkUnwritable, fmt::format("{}: {}", what, std::strerror(err)));
}

Json history_to_json(const HistoryEntry& entry) {
  return {{"result_id", entry.result_id},
          {"algorithm", std::string(algorithm_name(entry.algorithm))},
          {"seed", entry.seed},
          {"constraints", constraints_to_json(entry.constraints)},
          {"absent", entry.absent}};
}

HistoryEntry history_from_json(const Json& doc) {
  HistoryEntry entry;
  entry.result_id = doc.at("result_id").get<std::string>();
  entry.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
  entry.seed = doc.at("seed").get<std::uint64_t>();
  entry.constraints = constraints_from_json(doc.at("constraints"));
  entry.absent = doc.at("absent").get<std::vector<NodeId>>();
  return entry;
}

}  // namespace

Json roster_to_json(const Roster& roster) {
  Json history = Json::array();
  for (const HistoryEntry& entry : roster.history) history.push_back(history_to_json(entry));
  return {{"id", roster.id},
          {"name", roster.name},
          {"version", roster.version},
          {"created", roster.created},
          {"updated", roster.updated},
          {"network", network_to_json(roster.network)},
          {"history", std::move(history)}};
}

Roster roster_from_json(const Json& doc) {
  try {
    Roster roster;
    roster.id = doc.at("id").get<std::string>();
    roster.name = doc.at("name").get<std::string>();
    roster.version = doc.at("version").get<std::int64_t>();
    roster.created = doc.at("created").get<std::string>();
    roster.updated = doc.at("updated").get<std::string>();
    roster.network = network_from_json(doc.at("network"));
    for (const Json& entry : doc.at("history")) {
      roster.history.push_back(history_from_json(entry));
    }
    return roster;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kBadInput, fmt::format("malformed roster document: {}", e.what()));
  }
}

Json summary_to_json(const RosterSummary& summary) {
  return {{"id", summary.id},
          {"name", summary.name},
          {"version", summary.version},
          {"node_count", summary.node_count},
          {"user_count", summary.user_count},
          {"result_count", summary.result_count},
          {"updated", summary.updated}};
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t written = ::write(fd, data.data(), data.size());
    if (written < 0) {
      if (errno == EINTR) continue;
      io_failure(errno, "write failed");
    }
    data.remove_prefix(static_cast<std::size_t>(written));
  }
}

void write_file_atomic(const fs::path& target, std::string_view data,
                       const FaultHook& hook) {
  static std::atomic<std::uint64_t> counter{0};
  const fs::path temp = target.parent_path() /
                        fmt::format(".{}.tmp.{}.{}", target.filename().string(),
                                    ::getpid(), counter++);
  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_failure(errno, fmt::format("cannot create '{}'", temp.string()));
  try {
    if (hook) hook("write", target);
    write_all(fd, data);
    if (::fsync(fd) != 0) io_failure(errno, "fsync failed");
    if (::close(fd) != 0) io_failure(errno, "close failed");
  } catch (...) {
    ::close(fd);
    ::unlink(temp.c_str());
    throw;
  }
  try {
    if (hook) hook("rename", target);
    if (::rename(temp.c_str(), target.c_str()) != 0) {
      io_failure(errno, fmt::format("cannot replace '{}'", target.string()));
    }
  } catch (...) {
    ::unlink(temp.c_str());
    throw;
  }
}

RosterStore::RosterStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "rosters", ec);
  if (!ec) fs::create_directories(root_ / "results", ec);
  if (ec) {
    throw Error(ErrorCode::kSinkUnwritable,
                fmt::format("cannot use data directory '{}': {}", root_.string(),
                            ec.message()));
  }
}

fs::path RosterStore::roster_path(std::string_view id) const {
  return root_ / "rosters" / fmt::format("{}.json", id);
}

fs::path RosterStore::result_dir(std::string_view id) const {
  return root_ / "results" / std::string(id);
}

std::mutex& RosterStore::lock_for(std::string_view id) const {
  std::lock_guard guard(locks_guard_);
  auto it = locks_.find(id);
  if (it == locks_.end()) {
    it = locks_.emplace(std::string(id), std::make_unique<std::mutex>()).first;
  }
  return *it->second;
}

Roster RosterStore::load(std::string_view id) const {
  if (!valid_id(id)) not_found("roster", id);
  const fs::path path = roster_path(id);
  if (!fs::exists(path)) not_found("roster", id);
  return roster_from_json(read_json_file(path));
}

void RosterStore::save(const Roster& roster) const {
  write_file_atomic(roster_path(roster.id), dump_json(roster_to_json(roster)), hook_);
}

Roster RosterStore::create(const std::string& name, const SocialNetwork& network) {
  IndexedNetwork checked(network);  // throws on invalid networks
  Roster roster;
  roster.name = name;
  roster.network = network;
  roster.created = roster.updated = now_utc();
  for (;;) {
    roster.id = new_roster_id();
    std::lock_guard lock(lock_for(roster.id));
    if (fs::exists(roster_path(roster.id))) continue;
    save(roster);
    return roster;
  }
}

Roster RosterStore::get(std::string_view id) const {
  if (!valid_id(id)) not_found("roster", id);
  std::lock_guard lock(lock_for(id));
  return load(id);
}

std::vector<RosterSummary> RosterStore::list() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_ / "rosters")) {
    const fs::path& p = entry.path();
    if (p.extension() == ".json" && valid_id(p.stem().string())) {
      ids.push_back(p.stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  std::vector<RosterSummary> out;
  for (const std::string& id : ids) {
    std::lock_guard lock(lock_for(id));
    if (!fs::exists(roster_path(id))) continue;  // deleted meanwhile
    const Roster r = load(id);
    out.push_back({r.id, r.name, r.version, r.network.nodes.size(),
                   r.network.user_count(), r.history.size(), r.updated});
  }
  return out;
}

Roster RosterStore::update(std::string_view id, std::int64_t expected_version,
                           std::optional<std::string> name,
                           std::optional<SocialNetwork> network) {
  if (!valid_id(id)) not_found("roster", id);
  if (network) IndexedNetwork checked(*network);
  std::lock_guard lock(lock_for(id));
  Roster roster = load(id);
  if (roster.version != expected_version) {
    throw Error(ErrorCode::kConflictingUpdate,
                fmt::format("roster '{}' is at version {}, update was based on {}", id,
                            roster.version, expected_version));
  }
  if (name) roster.name = std::move(*name);
  if (network) roster.network = std::move(*network);
  ++roster.version;
  roster.updated = now_utc();
  save(roster);
  return roster;
}

void RosterStore::remove(std::string_view id) {
  if (!valid_id(id)) not_found("roster", id);
  std::lock_guard lock(lock_for(id));
  const fs::path path = roster_path(id);
  if (!fs::exists(path)) not_found("roster", id);
  std::error_code ec;
  fs::remove(path, ec);
  if (!ec) fs::remove_all(result_dir(id), ec);
  if (ec) {
    throw Error(ErrorCode::kSinkUnwritable,
                fmt::format("cannot delete roster '{}': {}", id, ec.message()));
  }
}

std::string RosterStore::add_result(std::string_view id, const Json& result,
                                    HistoryEntry entry) {
  if (!valid_id(id)) not_found("roster", id);
  std::lock_guard lock(lock_for(id));
  Roster roster = load(id);
  entry.result_id = fmt::format("res{:04}", roster.history.size() + 1);
  std::error_code ec;
  fs::create_directories(result_dir(id), ec);
  if (ec) io_failure(ec.value(), "cannot create result directory");
  write_file_atomic(result_dir(id) / (entry.result_id + ".json"), dump_json(result), hook_);
  roster.history.push_back(entry);
  save(roster);
  return entry.result_id;
}

Json RosterStore::get_result(std::string_view id, std::string_view result_id) const {
  if (!valid_id(id)) not_found("roster", id);
  if (!valid_id(result_id)) not_found("result", result_id);
  std::lock_guard lock(lock_for(id));
  load(id);
  const fs::path path = result_dir(id) / fmt::format("{}.json", result_id);
  if (!fs::exists(path)) not_found("result", result_id);
  return read_json_file(path);
}

void RosterStore::set_fault_hook(FaultHook hook) { hook_ = std::move(hook); }

}  // namespace peergroup::app
