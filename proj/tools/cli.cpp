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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "peergroup/app/benchmark.hpp"
#include "peergroup/app/io.hpp"
#include "peergroup/app/runner.hpp"
#include "peergroup/app/server.hpp"
#include "peergroup/dynamics.hpp"
#include "peergroup/error.hpp"
#include "peergroup/influence.hpp"
#include "peergroup/instance_gen.hpp"
#include "peergroup/milp.hpp"
#include "peergroup/random.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup::cli {
namespace {

namespace fs = std::filesystem;
using app::Json;

// Model parameter flags shared by several subcommands.
struct ParamFlags {
  std::string file;
  std::optional<int> lo, hi;
  std::optional<double> omega_un, omega_nu, weight_strong, weight_weak;
  bool no_facilitator = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--params", file, "Model parameter JSON file");
    cmd->add_option("--lo", lo, "Minimum group size");
    cmd->add_option("--hi", hi, "Maximum group size");
    cmd->add_option("--omega-un", omega_un, "Flip probability non-user to user");
    cmd->add_option("--omega-nu", omega_nu, "Flip probability user to non-user");
    cmd->add_option("--weight-strong", weight_strong, "Raw weight of a strong tie");
    cmd->add_option("--weight-weak", weight_weak, "Raw weight of a weak tie");
    cmd->add_flag("--no-facilitator", no_facilitator, "Do not add group facilitators");
  }

  ModelParams resolve(ModelParams base = {}) const {
    if (!file.empty()) base = app::params_from_json(app::read_json_file(file), base);
    if (lo) base.capacity.lo = *lo;
    if (hi) base.capacity.hi = *hi;
    if (omega_un) base.omega_user_given_non = *omega_un;
    if (omega_nu) base.omega_non_given_user = *omega_nu;
    if (weight_strong) base.weight_strong = *weight_strong;
    if (weight_weak) base.weight_weak = *weight_weak;
    if (no_facilitator) base.include_facilitator = false;
    validate_params(base);
    return base;
  }
};

SocialNetwork load_network(const std::string& path) {
  return app::network_from_json(app::read_json_file(path));
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    app::write_text_file(path, text);
  }
}

void print_table(const SolveResult& result, std::ostream& out) {
  const Evaluation& ev = result.evaluation;
  out << fmt::format("algorithm {}  seed {}  groups {}\n", algorithm_name(result.algorithm),
                     result.seed, ev.partition.group_count());
  out << fmt::format("expected non-users {:.6f}  success {:+.4f}\n", ev.expected_nonusers,
                     ev.success);
  if (ev.deviancy_warning()) {
    out << "WARNING: this grouping is expected to increase use (negative success)\n";
  }
  const auto groups = ev.partition.groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out << fmt::format("group {} ({} members)\n", g, groups[g].size());
    for (const NodeId& id : groups[g]) {
      const FlipProbability p = ev.flips.at(id);
      out << fmt::format("  {:<16} P(become user) {:.3f}  P(quit) {:.3f}\n", id,
                         p.become_user, p.become_nonuser);
    }
  }
}

std::atomic<app::ApiServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (app::ApiServer* server = g_server.load()) server->stop();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Intervention group formation: generate, solve, evaluate and serve rosters",
               "peergroup"};
  cli.require_subcommand(1);
  cli.set_help_all_flag("--help-all", "Show help for every subcommand");

  // generate
  auto* generate = cli.add_subcommand("generate", "Generate a small-world roster");
  WsParams ws;
  DecorationParams decoration;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate->add_option("--n", ws.n, "Number of people")->capture_default_str();
  generate->add_option("--k", ws.k, "Even ring degree")->capture_default_str();
  generate->add_option("--p", ws.p, "Rewiring probability")->capture_default_str();
  generate->add_option("--user-ratio", decoration.user_ratio, "Share of users")
      ->capture_default_str();
  generate->add_option("--strong-ratio", decoration.strong_ratio, "Share of strong ties")
      ->capture_default_str();
  generate->add_option("--reciprocity", decoration.reciprocity,
                       "Probability that a tie is mirrored")
      ->capture_default_str();
  generate->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  generate->add_option("-o,--output", gen_out, "Output network file (default stdout)");

  // import
  auto* import = cli.add_subcommand("import", "Convert node and tie CSV tables to a network");
  std::string nodes_csv, ties_csv, import_out;
  import->add_option("--nodes", nodes_csv, "CSV with columns id,behavior")->required();
  import->add_option("--ties", ties_csv, "CSV with columns from,to,strength")->required();
  import->add_option("-o,--output", import_out, "Output network file (default stdout)");

  // solve
  auto* solve = cli.add_subcommand("solve", "Compute a grouping");
  std::string solve_network, solve_request, solve_constraints, solve_previous, solve_out;
  std::string algo = "lns";
  std::uint64_t solve_seed = 0;
  double time_limit = 0.0;
  int restarts = 0, stall = 0, workers = 0, node_limit = 0;
  std::vector<std::string> absent;
  bool pin_others = false, timing = false, solve_json = false;
  ParamFlags solve_params;
  solve->add_option("--network", solve_network, "Network JSON file")->required();
  auto* algo_opt = solve->add_option("--algo", algo, "exact|lns|local|random|network|even")
                       ->check(CLI::IsMember({"exact", "lns", "local", "random", "network", "even"}));
  auto* seed_opt = solve->add_option("--seed", solve_seed, "Random seed");
  auto* time_opt = solve->add_option("--time-limit", time_limit, "Total seconds for lns/local");
  auto* restarts_opt = solve->add_option("--restarts", restarts, "Restarts for lns/local");
  auto* stall_opt = solve->add_option("--stall-limit", stall, "Non-improving steps per restart");
  auto* workers_opt = solve->add_option("--workers", workers, "Restart worker threads");
  auto* node_limit_opt = solve->add_option("--node-limit", node_limit, "Largest n for exact");
  solve->add_option("--request", solve_request, "Solve request JSON (same shape as the API)");
  solve->add_option("--constraints", solve_constraints, "Constraints JSON file");
  solve->add_option("--absent", absent, "Node ids to leave out")->delimiter(',');
  solve->add_option("--previous", solve_previous, "Previous partition or result file");
  solve->add_flag("--pin-others", pin_others, "Pin every remaining node to its previous group");
  solve->add_option("-o,--output", solve_out, "Write the result JSON here");
  solve->add_flag("--timing", timing, "Include wall-clock timings in the result file");
  solve->add_flag("--json", solve_json, "Print the result JSON instead of the table");
  solve_params.attach(solve);

  // evaluate
  auto* evaluate = cli.add_subcommand("evaluate", "Score a given grouping");
  std::string eval_network, eval_partition, eval_out;
  std::vector<std::string> eval_absent;
  ParamFlags eval_params;
  evaluate->add_option("--network", eval_network, "Network JSON file")->required();
  evaluate->add_option("--partition", eval_partition, "Partition or result JSON file")
      ->required();
  evaluate->add_option("--absent", eval_absent, "Node ids to leave out")->delimiter(',');
  evaluate->add_option("-o,--output", eval_out, "Output file (default stdout)");
  eval_params.attach(evaluate);

  // simulate
  auto* simulate_cmd = cli.add_subcommand("simulate", "Monte Carlo check of the closed form");
  std::string sim_network, sim_partition;
  std::int64_t samples = 100000;
  std::uint64_t sim_seed = 0;
  int sim_workers = 1;
  bool sim_json = false;
  ParamFlags sim_params;
  simulate_cmd->add_option("--network", sim_network, "Network JSON file")->required();
  simulate_cmd->add_option("--partition", sim_partition, "Partition or result JSON file")
      ->required();
  simulate_cmd->add_option("--samples", samples, "Number of samples")->capture_default_str();
  simulate_cmd->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("--workers", sim_workers, "Worker threads")->capture_default_str();
  simulate_cmd->add_flag("--json", sim_json, "Print JSON");
  sim_params.attach(simulate_cmd);

  // export-milp
  auto* export_cmd = cli.add_subcommand("export-milp", "Write the grouping MILP as LP files");
  std::string exp_network, exp_dir = ".", exp_name;
  std::optional<int> exp_s;
  bool exp_mps = false;
  ParamFlags exp_params;
  export_cmd->add_option("--network", exp_network, "Network JSON file")->required();
  export_cmd->add_option("--s", exp_s, "Number of groups (default: every feasible count)");
  export_cmd->add_option("--out-dir", exp_dir, "Output directory")->capture_default_str();
  export_cmd->add_option("--name", exp_name, "File name prefix (default: network file stem)");
  export_cmd->add_flag("--mps", exp_mps, "Also write MPS files");
  exp_params.attach(export_cmd);

  // benchmark
  auto* bench = cli.add_subcommand("benchmark", "Run the algorithm comparison benchmark");
  std::string bench_config, bench_dir = "benchmark-out";
  bool quiet = false;
  bench->add_option("--config", bench_config, "Benchmark config JSON file");
  bench->add_option("--out-dir", bench_dir, "Output directory")->capture_default_str();
  bench->add_flag("--quiet", quiet, "No progress output");

  // serve
  auto* serve = cli.add_subcommand("serve", "Start the local HTTP API");
  app::ServerOptions server_options;
  std::string data_dir = "peergroup-data";
  serve->add_option("--data-dir", data_dir, "Roster storage directory")
      ->envname("PEERGROUP_DATA_DIR")
      ->capture_default_str();
  serve->add_option("--host", server_options.host, "Bind address")
      ->envname("PEERGROUP_HOST")
      ->capture_default_str();
  serve->add_option("--port", server_options.port, "Port (0 picks a free one)")
      ->envname("PEERGROUP_PORT")
      ->capture_default_str();
  serve->add_option("--seed", server_options.default_seed, "Default solve seed")
      ->envname("PEERGROUP_SEED")
      ->capture_default_str();
  serve->add_option("--workers", server_options.workers, "Solver threads per request")
      ->envname("PEERGROUP_WORKERS")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    cli.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int status = cli.exit(e, out, err);
    return status == 0 ? 0 : 3;
  }

  try {
    if (generate->parsed()) {
      ws.seed = derive_seed(gen_seed, 1);
      decoration.seed = derive_seed(gen_seed, 2);
      const SocialNetwork net = decorate(ws.n, generate_ws(ws), decoration);
      emit(gen_out, app::dump_json(app::network_to_json(net)), out);
    } else if (import->parsed()) {
      std::ifstream nodes(nodes_csv), ties(ties_csv);
      if (!nodes || !ties) throw Error(ErrorCode::kBadInput, "cannot read the CSV tables");
      const SocialNetwork net = app::network_from_csv(nodes, ties);
      IndexedNetwork checked(net);
      emit(import_out, app::dump_json(app::network_to_json(net)), out);
    } else if (solve->parsed()) {
      const SocialNetwork net = load_network(solve_network);
      app::SolveRequest request;
      if (!solve_request.empty()) {
        request = app::request_from_json(app::read_json_file(solve_request));
      }
      if (algo_opt->count() > 0 || solve_request.empty()) request.algorithm = parse_algorithm(algo);
      if (seed_opt->count() > 0) request.seed = solve_seed;
      if (time_opt->count() > 0) request.time_limit_seconds = time_limit;
      if (restarts_opt->count() > 0) request.restarts = restarts;
      if (stall_opt->count() > 0) request.stall_limit = stall;
      if (workers_opt->count() > 0) request.workers = workers;
      if (node_limit_opt->count() > 0) request.exact_node_limit = node_limit;
      request.params = solve_params.resolve(request.params);
      if (!solve_constraints.empty()) {
        request.constraints = app::constraints_from_json(app::read_json_file(solve_constraints));
      }
      if (!absent.empty()) request.absent = absent;
      if (!solve_previous.empty()) {
        request.previous = app::partition_from_json(app::read_json_file(solve_previous));
      }
      if (pin_others) request.pin_others = true;
      const SolveResult result = app::run_solve(net, request);
      const std::string doc = app::dump_json(app::result_to_json(result, request.params, timing));
      if (!solve_out.empty()) app::write_text_file(solve_out, doc);
      if (solve_json) {
        out << doc;
      } else {
        print_table(result, out);
        out << fmt::format("wall time {:.3f} s\n", result.wall_time.count());
      }
    } else if (evaluate->parsed()) {
      const SocialNetwork net = app::working_network(load_network(eval_network), eval_absent);
      const Partition partition = app::partition_from_json(app::read_json_file(eval_partition));
      const Evaluation ev = evaluate_partition(net, partition, eval_params.resolve());
      emit(eval_out, app::dump_json(app::evaluation_to_json(ev)), out);
    } else if (simulate_cmd->parsed()) {
      const SocialNetwork net = load_network(sim_network);
      const Partition partition = app::partition_from_json(app::read_json_file(sim_partition));
      const ModelParams params = sim_params.resolve();
      const WeightedNetwork wnet = apply_intervention(net, partition, params);
      const double closed = expected_nonusers(wnet, params);
      const SimulationResult mc = simulate(wnet, params, samples, sim_seed, sim_workers);
      const double gap = std::abs(mc.mean - closed);
      const double z = mc.std_error > 0.0 ? gap / mc.std_error : 0.0;
      if (sim_json) {
        out << app::dump_json({{"closed_form", closed},
                               {"mean", mc.mean},
                               {"std_error", mc.std_error},
                               {"samples", mc.samples},
                               {"gap_in_std_errors", z}});
      } else {
        out << fmt::format("monte carlo  {:.6f} +- {:.6f} ({} samples)\n", mc.mean,
                           mc.std_error, mc.samples);
        out << fmt::format("closed form  {:.6f}\n", closed);
        out << fmt::format("difference   {:.6f} ({:.2f} standard errors)\n", gap, z);
      }
    } else if (export_cmd->parsed()) {
      const SocialNetwork net = load_network(exp_network);
      const ModelParams params = exp_params.resolve();
      const std::string name = exp_name.empty() ? fs::path(exp_network).stem().string() : exp_name;
      std::vector<int> counts;
      if (exp_s) {
        counts.push_back(*exp_s);
      } else {
        counts = feasible_group_counts(static_cast<int>(net.nodes.size()), params.capacity);
        if (counts.empty()) {
          throw Error(ErrorCode::kInfeasibleBounds, "no group count fits the capacity bounds");
        }
      }
      std::error_code ec;
      fs::create_directories(exp_dir, ec);
      for (int s : counts) {
        const MilpModel model = build_milp(net, params, s);
        const fs::path lp = fs::path(exp_dir) / fmt::format("{}.{}.lp", name, s);
        write_lp(model, lp);
        out << lp.string() << '\n';
        if (exp_mps) {
          const fs::path mps = fs::path(exp_dir) / fmt::format("{}.{}.mps", name, s);
          write_mps(model, mps);
          out << mps.string() << '\n';
        }
      }
    } else if (bench->parsed()) {
      app::BenchmarkConfig config;
      if (!bench_config.empty()) {
        config = app::benchmark_config_from_json(app::read_json_file(bench_config));
      }
      const auto report = app::run_benchmark(config, [&](std::string_view line) {
        if (!quiet) err << line << '\n';
      });
      app::write_report(report, bench_dir);
      for (const auto& s : report.summaries) {
        out << fmt::format("n={:<3} {:<8} mean success {:+.4f} (sd {:.4f})", s.n,
                           algorithm_name(s.algorithm), s.mean_success, s.stddev_success);
        if (std::isfinite(s.p_lns_better)) out << fmt::format("  p(lns better) {:.2e}", s.p_lns_better);
        out << '\n';
      }
      out << "report written to " << bench_dir << '\n';
    } else if (serve->parsed()) {
      server_options.data_dir = data_dir;
      app::ApiServer server(server_options);
      const int port = server.bind();
      out << fmt::format("listening on http://{}:{}\n", server_options.host, port) << std::flush;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      g_server = nullptr;
    }
  } catch (const Error& e) {
    err << app::error_to_json(e.code(), e.what()).dump() << '\n';
    return app::exit_status(e.code());
  }
  return 0;
}

}  // namespace peergroup::cli
