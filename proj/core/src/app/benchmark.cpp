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

#include "peergroup/app/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "peergroup/app/runner.hpp"
#include "peergroup/error.hpp"
#include "peergroup/instance_gen.hpp"

namespace peergroup::app {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void bad(const std::string& message) {
  throw Error(ErrorCode::kBadInput, message);
}

double total_seconds(const SolveResult& r) {
  return std::accumulate(r.restart_seconds.begin(), r.restart_seconds.end(), 0.0);
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

LnsConfig lns_config(const BenchmarkConfig& c, std::uint64_t seed) {
  LnsConfig config;
  config.restarts = c.restarts;
  config.time_limit = std::chrono::duration<double>(c.time_limit_seconds);
  config.stall_limit = c.stall_limit;
  config.seed = seed;
  config.workers = c.workers;
  return config;
}

std::string num(double v) { return fmt::format("{:.12g}", v); }

}  // namespace

BenchmarkConfig benchmark_config_from_json(const Json& doc) {
  if (!doc.is_object()) bad("benchmark config must be a JSON object");
  static const std::set<std::string> known = {
      "sizes", "instances", "user_ratio", "seed", "algorithms", "params", "restarts",
      "time_limit", "stall_limit", "workers", "small_vs_large", "small_vs_large_n",
      "small_vs_large_instances", "omega_sweep", "omega_n", "omega_instances",
      "omega_values", "omega_algorithm", "scaling", "scaling_sizes",
      "scaling_instances"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) bad(fmt::format("unknown benchmark config key \"{}\"", key));
  }
  BenchmarkConfig c;
  try {
    auto get = [&](const char* key, auto& target) {
      if (auto it = doc.find(key); it != doc.end()) {
        target = it->get<std::decay_t<decltype(target)>>();
      }
    };
    get("sizes", c.sizes);
    get("instances", c.instances);
    get("user_ratio", c.user_ratio);
    get("seed", c.seed);
    get("restarts", c.restarts);
    get("time_limit", c.time_limit_seconds);
    get("stall_limit", c.stall_limit);
    get("workers", c.workers);
    get("small_vs_large", c.small_vs_large);
    get("small_vs_large_n", c.small_vs_large_n);
    get("small_vs_large_instances", c.small_vs_large_instances);
    get("omega_sweep", c.omega_sweep);
    get("omega_n", c.omega_n);
    get("omega_instances", c.omega_instances);
    get("omega_values", c.omega_values);
    get("scaling", c.scaling);
    get("scaling_sizes", c.scaling_sizes);
    get("scaling_instances", c.scaling_instances);
    if (auto it = doc.find("algorithms"); it != doc.end()) {
      c.algorithms.clear();
      for (const Json& name : *it) c.algorithms.push_back(parse_algorithm(name.get<std::string>()));
    }
    if (auto it = doc.find("omega_algorithm"); it != doc.end()) {
      c.omega_algorithm = parse_algorithm(it->get<std::string>());
    }
    if (auto it = doc.find("params"); it != doc.end()) c.params = params_from_json(*it);
  } catch (const Json::exception& e) {
    bad(fmt::format("malformed benchmark config: {}", e.what()));
  }
  if (c.instances < 1 || c.restarts < 1 || c.stall_limit < 1 || c.workers < 1) {
    bad("instances, restarts, stall_limit and workers must be positive");
  }
  return c;
}

Json benchmark_config_to_json(const BenchmarkConfig& c) {
  Json algorithms = Json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(std::string(algorithm_name(a)));
  return {{"sizes", c.sizes},
          {"instances", c.instances},
          {"user_ratio", c.user_ratio},
          {"seed", c.seed},
          {"algorithms", std::move(algorithms)},
          {"params", params_to_json(c.params)},
          {"restarts", c.restarts},
          {"time_limit", c.time_limit_seconds},
          {"stall_limit", c.stall_limit},
          {"workers", c.workers},
          {"small_vs_large", c.small_vs_large},
          {"small_vs_large_n", c.small_vs_large_n},
          {"small_vs_large_instances", c.small_vs_large_instances},
          {"omega_sweep", c.omega_sweep},
          {"omega_n", c.omega_n},
          {"omega_instances", c.omega_instances},
          {"omega_values", c.omega_values},
          {"omega_algorithm", std::string(algorithm_name(c.omega_algorithm))},
          {"scaling", c.scaling},
          {"scaling_sizes", c.scaling_sizes},
          {"scaling_instances", c.scaling_instances}};
}

SmallVsLargeRow small_vs_large_run(const SocialNetwork& net, const BenchmarkConfig& config,
                                   std::uint64_t instance_seed, std::uint64_t solver_seed) {
  const LnsConfig lns = lns_config(config, solver_seed);
  const SolveResult large = solve_lns(net, config.params, lns);
  LnsConfig local = lns;
  const double budget = std::max(total_seconds(large), 1e-6);
  local.time_limit = std::chrono::duration<double>(budget);
  const SolveResult small = solve_local_search(net, config.params, local);
  SmallVsLargeRow row;
  row.instance_seed = instance_seed;
  row.n = static_cast<int>(net.nodes.size());
  row.budget_ms = budget * 1e3;
  row.lns_expected_nonusers = large.evaluation.expected_nonusers;
  row.local_expected_nonusers = small.evaluation.expected_nonusers;
  row.lns_success = large.evaluation.success;
  row.local_success = small.evaluation.success;
  return row;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress) {
  auto note = [&](const std::string& message) {
    if (progress) progress(message);
  };
  BenchmarkReport report;
  report.config = config;

  for (int n : config.sizes) {
    for (int i = 0; i < config.instances; ++i) {
      const std::uint64_t instance_seed = config.seed + static_cast<std::uint64_t>(i);
      const SocialNetwork net = generate_instance(n, instance_seed, config.user_ratio);
      std::optional<double> lns_budget;
      std::vector<Algorithm> order = config.algorithms;
      // LNS first so local search can inherit its wall time.
      std::stable_partition(order.begin(), order.end(),
                            [](Algorithm a) { return a == Algorithm::kLns; });
      std::map<Algorithm, BenchmarkRow> rows;
      for (Algorithm algorithm : order) {
        const auto start = std::chrono::steady_clock::now();
        SolveResult result;
        if (algorithm == Algorithm::kLns || algorithm == Algorithm::kLocalSearch) {
          LnsConfig lns = lns_config(config, instance_seed);
          if (algorithm == Algorithm::kLocalSearch && lns_budget) {
            lns.time_limit = std::chrono::duration<double>(std::max(*lns_budget, 1e-6));
          }
          result = algorithm == Algorithm::kLns ? solve_lns(net, config.params, lns)
                                                : solve_local_search(net, config.params, lns);
          if (algorithm == Algorithm::kLns) lns_budget = total_seconds(result);
        } else if (algorithm == Algorithm::kExact) {
          result = solve_exact(net, config.params);
        } else {
          result = solve_baseline(net, config.params, algorithm, instance_seed);
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        rows[algorithm] = {algorithm, instance_seed, n, result.evaluation.success,
                           result.evaluation.expected_nonusers, ms};
      }
      for (Algorithm algorithm : config.algorithms) report.rows.push_back(rows[algorithm]);
      note(fmt::format("comparison n={} instance {}/{}", n, i + 1, config.instances));
    }
  }
  report.summaries = summarize(report.rows);

  if (config.small_vs_large) {
    for (int i = 0; i < config.small_vs_large_instances; ++i) {
      const std::uint64_t instance_seed = config.seed + static_cast<std::uint64_t>(i);
      const SocialNetwork net =
          generate_instance(config.small_vs_large_n, instance_seed, config.user_ratio);
      report.small_vs_large.push_back(
          small_vs_large_run(net, config, instance_seed, instance_seed));
      note(fmt::format("small-vs-large instance {}/{}", i + 1,
                       config.small_vs_large_instances));
    }
  }

  if (config.omega_sweep) {
    for (int i = 0; i < config.omega_instances; ++i) {
      const std::uint64_t instance_seed = config.seed + static_cast<std::uint64_t>(i);
      const SocialNetwork net =
          generate_instance(config.omega_n, instance_seed, config.user_ratio);
      for (double omega : config.omega_values) {
        SolveRequest request;
        request.algorithm = config.omega_algorithm;
        request.params = config.params;
        request.params.omega_user_given_non = omega;
        request.seed = instance_seed;
        request.restarts = config.restarts;
        request.time_limit_seconds = config.time_limit_seconds;
        request.stall_limit = config.stall_limit;
        request.workers = config.workers;
        const SolveResult result = run_solve(net, request);
        report.omega.push_back({instance_seed, config.omega_n, omega,
                                request.params.omega_non_given_user,
                                result.evaluation.success,
                                result.evaluation.expected_nonusers});
      }
      note(fmt::format("omega sweep instance {}/{}", i + 1, config.omega_instances));
    }
  }

  report.scaling_exponent = kNaN;
  if (config.scaling) {
    std::vector<double> xs, ys;
    for (int n : config.scaling_sizes) {
      std::vector<double> medians;
      for (int i = 0; i < config.scaling_instances; ++i) {
        const std::uint64_t instance_seed = config.seed + static_cast<std::uint64_t>(i);
        const SocialNetwork net = generate_instance(n, instance_seed, config.user_ratio);
        const SolveResult result =
            solve_lns(net, config.params, lns_config(config, instance_seed));
        ScalingRow row{instance_seed, n, config.restarts, median(result.restart_seconds) * 1e3,
                       total_seconds(result) * 1e3};
        medians.push_back(row.median_restart_ms);
        report.scaling.push_back(row);
      }
      xs.push_back(n);
      ys.push_back(std::max(median(medians), 1e-9));
      note(fmt::format("scaling n={}", n));
    }
    if (xs.size() >= 2) report.scaling_exponent = power_law_exponent(xs, ys);
  }
  return report;
}

std::vector<AlgorithmSummary> summarize(std::span<const BenchmarkRow> rows) {
  std::map<std::pair<int, int>, std::vector<const BenchmarkRow*>> cells;
  std::vector<std::pair<int, int>> order;
  for (const BenchmarkRow& row : rows) {
    const auto key = std::pair(row.n, static_cast<int>(row.algorithm));
    if (!cells.contains(key)) order.push_back(key);
    cells[key].push_back(&row);
  }
  std::vector<AlgorithmSummary> out;
  for (const auto& key : order) {
    const auto& cell = cells[key];
    AlgorithmSummary s;
    s.n = key.first;
    s.algorithm = static_cast<Algorithm>(key.second);
    s.count = static_cast<int>(cell.size());
    for (const BenchmarkRow* r : cell) {
      s.mean_success += r->success;
      s.mean_expected_nonusers += r->expected_nonusers;
      s.mean_wall_ms += r->wall_ms;
    }
    s.mean_success /= s.count;
    s.mean_expected_nonusers /= s.count;
    s.mean_wall_ms /= s.count;
    double ss = 0.0;
    for (const BenchmarkRow* r : cell) ss += (r->success - s.mean_success) * (r->success - s.mean_success);
    s.stddev_success = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;

    s.p_lns_better = kNaN;
    const auto lns_key = std::pair(s.n, static_cast<int>(Algorithm::kLns));
    if (s.algorithm != Algorithm::kLns && cells.contains(lns_key)) {
      std::map<std::uint64_t, double> lns;
      for (const BenchmarkRow* r : cells[lns_key]) lns[r->instance_seed] = r->success;
      std::vector<double> a, b;
      for (const BenchmarkRow* r : cell) {
        if (auto it = lns.find(r->instance_seed); it != lns.end()) {
          a.push_back(it->second);
          b.push_back(r->success);
        }
      }
      if (a.size() >= 2) s.p_lns_better = paired_one_sided_p(a, b);
    }
    out.push_back(s);
  }
  return out;
}

double power_law_exponent(std::span<const double> x, std::span<const double> y) {
  const std::size_t k = std::min(x.size(), y.size());
  if (k < 2) return kNaN;
  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    mx += std::log(x[t]);
    my += std::log(y[t]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const double dx = std::log(x[t]) - mx;
    sxy += dx * (std::log(y[t]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

double paired_one_sided_p(std::span<const double> a, std::span<const double> b) {
  const std::size_t k = std::min(a.size(), b.size());
  if (k < 2) return kNaN;
  double mean = 0.0;
  for (std::size_t t = 0; t < k; ++t) mean += a[t] - b[t];
  mean /= k;
  double ss = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const double d = a[t] - b[t] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (k - 1));
  if (sd == 0.0) return mean > 0.0 ? 0.0 : 1.0;
  const double t_stat = mean / (sd / std::sqrt(static_cast<double>(k)));
  const boost::math::students_t dist(static_cast<double>(k - 1));
  return boost::math::cdf(boost::math::complement(dist, t_stat));
}

void write_benchmark_csv(std::span<const BenchmarkRow> rows, std::ostream& out) {
  out << "algo,instance_seed,n,success,expected_nonusers,wall_ms\n";
  for (const BenchmarkRow& r : rows) {
    out << algorithm_name(r.algorithm) << ',' << r.instance_seed << ',' << r.n << ','
        << num(r.success) << ',' << num(r.expected_nonusers) << ',' << num(r.wall_ms) << '\n';
  }
}

void write_small_vs_large_csv(std::span<const SmallVsLargeRow> rows, std::ostream& out) {
  out << "instance_seed,n,budget_ms,lns_expected_nonusers,local_expected_nonusers,"
         "lns_success,local_success\n";
  for (const SmallVsLargeRow& r : rows) {
    out << r.instance_seed << ',' << r.n << ',' << num(r.budget_ms) << ','
        << num(r.lns_expected_nonusers) << ',' << num(r.local_expected_nonusers) << ','
        << num(r.lns_success) << ',' << num(r.local_success) << '\n';
  }
}

void write_omega_csv(std::span<const OmegaRow> rows, std::ostream& out) {
  out << "instance_seed,n,omega_user_given_non,omega_non_given_user,success,"
         "expected_nonusers\n";
  for (const OmegaRow& r : rows) {
    out << r.instance_seed << ',' << r.n << ',' << num(r.omega_user_given_non) << ','
        << num(r.omega_non_given_user) << ',' << num(r.success) << ','
        << num(r.expected_nonusers) << '\n';
  }
}

void write_scaling_csv(std::span<const ScalingRow> rows, std::ostream& out) {
  out << "instance_seed,n,restarts,median_restart_ms,total_ms\n";
  for (const ScalingRow& r : rows) {
    out << r.instance_seed << ',' << r.n << ',' << r.restarts << ','
        << num(r.median_restart_ms) << ',' << num(r.total_ms) << '\n';
  }
}

Json report_to_json(const BenchmarkReport& report) {
  auto finite = [](double v) -> Json { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json summaries = Json::array();
  for (const AlgorithmSummary& s : report.summaries) {
    summaries.push_back({{"algorithm", std::string(algorithm_name(s.algorithm))},
                         {"n", s.n},
                         {"count", s.count},
                         {"mean_success", s.mean_success},
                         {"stddev_success", s.stddev_success},
                         {"mean_expected_nonusers", s.mean_expected_nonusers},
                         {"mean_wall_ms", s.mean_wall_ms},
                         {"p_lns_better", finite(s.p_lns_better)}});
  }
  int lns_wins = 0;
  for (const SmallVsLargeRow& r : report.small_vs_large) {
    lns_wins += r.lns_expected_nonusers > r.local_expected_nonusers + 1e-9;
  }
  return {{"config", benchmark_config_to_json(report.config)},
          {"summaries", std::move(summaries)},
          {"small_vs_large_lns_wins", lns_wins},
          {"small_vs_large_instances", report.small_vs_large.size()},
          {"scaling_exponent", finite(report.scaling_exponent)}};
}

void write_report(const BenchmarkReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kSinkUnwritable,
                fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  }
  auto emit = [&](const char* name, auto writer) {
    std::ostringstream out;
    writer(out);
    write_text_file(dir / name, out.str());
  };
  write_text_file(dir / "report.json", dump_json(report_to_json(report)));
  emit("baseline_comparison.csv", [&](std::ostream& o) { write_benchmark_csv(report.rows, o); });
  emit("small_vs_large.csv",
       [&](std::ostream& o) { write_small_vs_large_csv(report.small_vs_large, o); });
  emit("omega_ratio.csv", [&](std::ostream& o) { write_omega_csv(report.omega, o); });
  emit("scaling.csv", [&](std::ostream& o) { write_scaling_csv(report.scaling, o); });
}

}  // namespace peergroup::app
