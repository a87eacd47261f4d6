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

// Local JSON HTTP API over a RosterStore.
//
//   POST   /rosters                       {"name", "network"}
//   GET    /rosters
//   GET    /rosters/{id}
//   PUT    /rosters/{id}                  {"version", "name"?, "network"?}
//   DELETE /rosters/{id}
//   POST   /rosters/{id}/solve            SolveRequest fields, plus optional
//                                         "previous_result" (a result id)
//   POST   /rosters/{id}/evaluate         {"partition", "params"?, "absent"?}
//   GET    /rosters/{id}/results/{rid}
//   GET    /healthz
//
// Errors are {"code", "message", "details"}. A new solve for a roster
// cancels the one still running for it.

#ifndef PEERGROUP_APP_SERVER_HPP_
#define PEERGROUP_APP_SERVER_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "peergroup/app/store.hpp"

namespace peergroup::app {

struct ServerOptions {
  std::filesystem::path data_dir = "peergroup-data";
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::uint64_t default_seed = 0;
  int workers = 1;  // solver threads per request
};

class ApiServer {
 public:
  explicit ApiServer(ServerOptions options);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Returns the bound port. Throws Error(kBadInput) when binding fails.
  int bind();
  // Serves until stop(); bind() must have succeeded.
  void run();
  // Blocks until run() accepts connections.
  void wait_until_ready();
  void stop();

  RosterStore& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace peergroup::app

#endif  // PEERGROUP_APP_SERVER_HPP_
