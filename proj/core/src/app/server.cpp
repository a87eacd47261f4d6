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

#include "peergroup/app/server.hpp"

#include <map>
#include <mutex>
#include <stop_token>

#include <fmt/format.h>
#include <httplib.h>

#include "peergroup/app/runner.hpp"
#include "peergroup/error.hpp"

namespace peergroup::app {
namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kId = "([A-Za-z0-9_-]+)";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  reply(res, http_status(code), error_to_json(code, message));
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kBadInput, fmt::format("request body is not JSON: {}", e.what()));
  }
}

// Runs a handler, translating errors into JSON responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      reply_error(res, e.code(), e.what());
    } catch (const Json::exception& e) {
      reply_error(res, ErrorCode::kBadInput, e.what());
    }
  };
}

}  // namespace

struct ApiServer::Impl {
  explicit Impl(ServerOptions opts) : options(std::move(opts)), store(options.data_dir) {}

  ServerOptions options;
  RosterStore store;
  httplib::Server http;
  int port = -1;

  std::mutex solves_guard;
  std::map<std::string, std::pair<std::uint64_t, std::stop_source>> solves;
  std::uint64_t solve_counter = 0;

  void routes();
  void solve(const httplib::Request& req, httplib::Response& res);
};

void ApiServer::Impl::routes() {
  http.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}});
  });

  http.Post("/rosters", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    std::string name = body.value("name", std::string());
    if (!body.contains("network")) throw Error(ErrorCode::kBadInput, "missing \"network\"");
    reply(res, 201, roster_to_json(store.create(name, network_from_json(body["network"]))));
  }));

  http.Get("/rosters", guarded([this](const httplib::Request&, httplib::Response& res) {
    Json list = Json::array();
    for (const RosterSummary& s : store.list()) list.push_back(summary_to_json(s));
    reply(res, 200, {{"rosters", std::move(list)}});
  }));

  const std::string roster = fmt::format("/rosters/{}", kId);
  http.Get(roster, guarded([this](const httplib::Request& req, httplib::Response& res) {
    reply(res, 200, roster_to_json(store.get(req.matches[1].str())));
  }));

  http.Put(roster, guarded([this](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    if (!body.is_object() || !body.contains("version") ||
        !body["version"].is_number_integer()) {
      throw Error(ErrorCode::kBadInput, "update needs the integer \"version\" it is based on");
    }
    std::optional<std::string> name;
    if (body.contains("name")) name = body["name"].get<std::string>();
    std::optional<SocialNetwork> net;
    if (body.contains("network")) net = network_from_json(body["network"]);
    reply(res, 200,
          roster_to_json(store.update(req.matches[1].str(),
                                      body["version"].get<std::int64_t>(), name, net)));
  }));

  http.Delete(roster, guarded([this](const httplib::Request& req, httplib::Response& res) {
    store.remove(req.matches[1].str());
    res.status = 204;
  }));

  http.Post(roster + "/solve", guarded([this](const httplib::Request& req,
                                              httplib::Response& res) { solve(req, res); }));

  http.Post(roster + "/evaluate",
            guarded([this](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    const Roster r = store.get(req.matches[1].str());
    SolveRequest request;
    request = request_from_json(
        Json{{"params", body.value("params", Json::object())},
             {"absent", body.value("absent", Json::array())}},
        request);
    if (!body.contains("partition")) throw Error(ErrorCode::kBadInput, "missing \"partition\"");
    const SocialNetwork working = working_network(r.network, request.absent);
    reply(res, 200,
          evaluation_to_json(evaluate_partition(working, partition_from_json(body["partition"]),
                                                request.params)));
  }));

  http.Get(fmt::format("/rosters/{}/results/{}", kId, kId),
           guarded([this](const httplib::Request& req, httplib::Response& res) {
    reply(res, 200, store.get_result(req.matches[1].str(), req.matches[2].str()));
  }));

  http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const ErrorCode code = res.status == 404 ? ErrorCode::kNotFound : ErrorCode::kBadInput;
    const int status = res.status;
    reply(res, status,
          error_to_json(code, fmt::format("{} {} is not a known route", req.method, req.path)));
  });
  http.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        reply(res, 500, {{"code", "internal"}, {"message", message}, {"details", Json::object()}});
      });
}

void ApiServer::Impl::solve(const httplib::Request& req, httplib::Response& res) {
  const std::string id = req.matches[1].str();
  const Json body = parse_body(req);
  const Roster r = store.get(id);
  SolveRequest defaults;
  defaults.seed = options.default_seed;
  defaults.workers = options.workers;
  SolveRequest request = request_from_json(body, defaults);
  if (auto it = body.find("previous_result"); it != body.end()) {
    if (!it->is_string()) throw Error(ErrorCode::kBadInput, "previous_result must be a string");
    request.previous = partition_from_json(store.get_result(id, it->get<std::string>()));
  }

  std::stop_source source;
  std::uint64_t ticket = 0;
  {
    std::lock_guard lock(solves_guard);
    auto it = solves.find(id);
    if (it != solves.end()) it->second.second.request_stop();
    ticket = ++solve_counter;
    solves[id] = {ticket, source};
  }
  struct Release {
    Impl& self;
    const std::string& id;
    std::uint64_t ticket;
    ~Release() {
      std::lock_guard lock(self.solves_guard);
      auto it = self.solves.find(id);
      if (it != self.solves.end() && it->second.first == ticket) self.solves.erase(it);
    }
  } release{*this, id, ticket};

  const SolveResult result = run_solve(r.network, request, source.get_token());
  Json doc = result_to_json(result, request.params);
  HistoryEntry entry{std::string(), request.algorithm, request.seed,
                     effective_constraints(working_network(r.network, request.absent), request),
                     request.absent};
  const std::string result_id = store.add_result(id, doc, entry);
  doc["result_id"] = result_id;
  doc["roster_id"] = id;
  reply(res, 200, doc);
}

ApiServer::ApiServer(ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(impl_->options.host);
  } else {
    impl_->port = impl_->http.bind_to_port(impl_->options.host, impl_->options.port)
                      ? impl_->options.port
                      : -1;
  }
  if (impl_->port < 0) {
    throw Error(ErrorCode::kBadInput, fmt::format("cannot bind {}:{}", impl_->options.host,
                                                  impl_->options.port));
  }
  return impl_->port;
}

void ApiServer::run() { impl_->http.listen_after_bind(); }

void ApiServer::wait_until_ready() { impl_->http.wait_until_ready(); }

void ApiServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

RosterStore& ApiServer::store() { return impl_->store; }

}  // namespace peergroup::app
