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

// Runs every primary acceptance criterion and prints one PASS/FAIL line per
// criterion. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "api_fixture.hpp"
#include "lp_reader.hpp"
#include "networks.hpp"
#include "oracle.hpp"
#include "peergroup/app/benchmark.hpp"
#include "peergroup/app/io.hpp"
#include "peergroup/dynamics.hpp"
#include "peergroup/influence.hpp"
#include "peergroup/instance_gen.hpp"
#include "peergroup/milp.hpp"
#include "peergroup/solvers.hpp"

namespace {

using namespace peergroup;
using app::BenchmarkConfig;
using app::Json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

PostTie from_indicators(oracle::PostIndicators x) {
  if (x.strong + x.weak > 1) return static_cast<PostTie>(255);
  if (x.strong == 1) return PostTie::kStrong;
  if (x.weak == 1) return PostTie::kWeak;
  return PostTie::kNone;
}

Outcome tie_table() {
  const auto start = Clock::now();
  int cases = 0;
  int mismatches = 0;
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      for (int pre = 0; pre < 3; ++pre) {
        for (int z = 0; z < 2; ++z) {
          const PostTie expected = from_indicators(oracle::post_indicators(bi, bj, pre, z));
          const PostTie got = tie_transition(static_cast<Behavior>(bi),
                                             static_cast<Behavior>(bj),
                                             static_cast<PreTie>(pre), z == 1);
          mismatches += got != expected;
          ++cases;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {cases == 24 && mismatches == 0 && elapsed < 1.0,
          fmt::format("{} cases, {} mismatches, {:.6f} s", cases, mismatches, elapsed)};
}

Outcome closed_form_vs_monte_carlo() {
  const ModelParams params;
  int failures = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SocialNetwork net = generate_instance(30, seed);
    const Partition partition = baseline_random(net, params, seed);
    const WeightedNetwork wnet = apply_intervention(net, partition, params);
    const double exact = expected_nonusers(wnet, params);
    const SimulationResult mc = simulate(wnet, params, 100000, seed);
    const double z = std::abs(mc.mean - exact) / mc.std_error;
    worst = std::max(worst, z);
    failures += !(mc.std_error > 0.0 && z <= 4.0);
  }
  return {failures == 0,
          fmt::format("50 instances, {} outside 4 stderr, worst {:.3f} stderr", failures, worst)};
}

Outcome exact_oracle() {
  const ModelParams params;
  int value_mismatches = 0;
  int lns_short = 0;
  double worst_ratio = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 6 + static_cast<int>(seed % 4);
    const SocialNetwork net = generate_instance(n, seed);
    const double exact = solve_exact(net, params).evaluation.expected_nonusers;
    const oracle::BruteForce brute = oracle::brute_force(net, params);
    value_mismatches += !(std::abs(exact - brute.best) <= 1e-9);
    LnsConfig lns;
    lns.restarts = 50;
    lns.seed = seed;
    const double heuristic = solve_lns(net, params, lns).evaluation.expected_nonusers;
    worst_ratio = std::min(worst_ratio, heuristic / exact);
    lns_short += !(heuristic >= 0.98 * exact);
  }
  return {value_mismatches == 0 && lns_short == 0,
          fmt::format("20 instances (n 6..9), {} exact mismatches, {} LNS below 0.98, "
                      "worst LNS ratio {:.6f}",
                      value_mismatches, lns_short, worst_ratio)};
}

// Every partition of n nodes into exactly `groups` blocks within the bounds,
// enumerated as restricted growth strings.
void for_each_partition(int n, int groups, CapacityBounds bounds,
                        const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == n) {
      if (used != groups) return;
      std::vector<int> sizes(static_cast<std::size_t>(groups), 0);
      for (int l : labels) ++sizes[l];
      for (int s : sizes) {
        if (s < bounds.lo || s > bounds.hi) return;
      }
      visit(labels);
      return;
    }
    for (int g = 0; g <= std::min(used, groups - 1); ++g) {
      labels[pos] = g;
      rec(pos + 1, std::max(used, g + 1));
    }
  };
  rec(0, 0);
}

Outcome milp_consistency() {
  int points = 0;
  int violations = 0;
  int objective_mismatches = 0;
  double worst_violation = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 3 + static_cast<int>(seed % 4);
    const SocialNetwork net = generate_instance(n, seed, 0.5, 2, 0.5);
    ModelParams params = testnet::params(1, 3, false);
    params.omega_user_given_non = 0.7;
    params.omega_non_given_user = 0.45;
    for (int s : feasible_group_counts(n, params.capacity)) {
      const MilpModel model = build_milp(net, params, s);
      std::ostringstream text;
      write_lp(model, text);
      const oracle::LpFile lp = oracle::parse_lp(text.str());
      for_each_partition(n, s, params.capacity, [&](const std::vector<int>& labels) {
        Partition p;
        for (int i = 0; i < n; ++i) p.assign(net.nodes[i].id, labels[i]);
        const std::vector<double> x = milp_point(model, net, p, params);
        std::map<std::string, double> by_name;
        for (std::size_t v = 0; v < x.size(); ++v) by_name[model.variables[v].name] = x[v];
        const double expected = evaluate_partition(net, p, params).expected_nonusers;
        const double violation = std::max(model.max_violation(x), lp.max_violation(by_name));
        worst_violation = std::max(worst_violation, violation);
        violations += !(violation <= 1e-9);
        objective_mismatches += !(std::abs(model.objective_value(x) - expected) <= 1e-9 &&
                                  std::abs(lp.objective_value(by_name) - expected) <= 1e-9);
        ++points;
      });
    }
  }
  return {points > 0 && violations == 0 && objective_mismatches == 0,
          fmt::format("10 instances (n 3..6), {} partitions, {} infeasible, {} objective "
                      "mismatches, worst violation {:.2e}",
                      points, violations, objective_mismatches, worst_violation)};
}

BenchmarkConfig sections_off() {
  BenchmarkConfig c;
  c.sizes.clear();
  c.small_vs_large = false;
  c.omega_sweep = false;
  c.scaling = false;
  return c;
}

Outcome baseline_ordering() {
  BenchmarkConfig c = sections_off();
  c.sizes = {20, 30, 40};
  c.instances = 25;
  c.algorithms = {Algorithm::kLns, Algorithm::kRandom, Algorithm::kNetwork,
                  Algorithm::kEvenUsers};
  const auto report = app::run_benchmark(c);
  std::map<int, double> lns_mean;
  for (const auto& s : report.summaries) {
    if (s.algorithm == Algorithm::kLns) lns_mean[s.n] = s.mean_success;
  }
  bool pass = report.summaries.size() == 12;
  std::string detail;
  for (const auto& s : report.summaries) {
    if (s.algorithm == Algorithm::kLns) continue;
    const bool ok = s.count == 25 && lns_mean.at(s.n) > s.mean_success && s.p_lns_better < 0.05;
    pass = pass && ok;
    detail += fmt::format("{}n={} {} {:.4f} vs lns {:.4f} p={:.2e}", detail.empty() ? "" : "; ",
                          s.n, algorithm_name(s.algorithm), s.mean_success,
                          lns_mean.at(s.n), s.p_lns_better);
  }
  return {pass, detail};
}

Outcome small_vs_large() {
  BenchmarkConfig c = sections_off();
  c.small_vs_large = true;
  c.small_vs_large_n = 30;
  c.small_vs_large_instances = 10;
  const auto report = app::run_benchmark(c);
  double lns = 0.0;
  double local = 0.0;
  int wins = 0;
  for (const auto& r : report.small_vs_large) {
    lns += r.lns_expected_nonusers;
    local += r.local_expected_nonusers;
    wins += r.lns_expected_nonusers > r.local_expected_nonusers + 1e-9;
  }
  const auto count = static_cast<double>(report.small_vs_large.size());
  return {report.small_vs_large.size() == 10 && lns >= local && wins >= 7,
          fmt::format("mean expected non-users lns {:.4f} vs local {:.4f}, lns better on {}/10",
                      lns / count, local / count, wins)};
}

Outcome omega_monotonicity() {
  int violations = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SocialNetwork net = generate_instance(12, seed);
    double previous = INFINITY;
    std::string line;
    for (double omega : {0.25, 0.5, 0.75, 1.0}) {
      ModelParams params;
      params.omega_user_given_non = omega;
      params.omega_non_given_user = 0.8;
      const double s = solve_exact(net, params).evaluation.success;
      violations += s > previous + 1e-12;
      previous = s;
      line += fmt::format("{}{:.4f}", line.empty() ? "" : ">", s);
    }
    detail += fmt::format("{}seed {}: {}", detail.empty() ? "" : "; ", seed, line);
  }
  return {violations == 0, fmt::format("{} violations; {}", violations, detail)};
}

Outcome scaling() {
  BenchmarkConfig c = sections_off();
  c.scaling = true;
  c.scaling_sizes = {20, 40, 60};
  c.scaling_instances = 3;
  c.restarts = 50;
  const auto report = app::run_benchmark(c);
  double worst_n60 = 0.0;
  for (const auto& r : report.scaling) {
    if (r.n == 60) worst_n60 = std::max(worst_n60, r.total_ms / 1e3);
  }
  return {std::isfinite(report.scaling_exponent) && report.scaling_exponent < 4.0 &&
              worst_n60 > 0.0 && worst_n60 < 600.0,
          fmt::format("exponent {:.3f}, slowest n=60 with 50 restarts {:.2f} s",
                      report.scaling_exponent, worst_n60)};
}

Outcome deviancy_through_api() {
  testapi::LiveServer server("acceptance");
  const SocialNetwork net =
      testnet::make({{"u", testnet::U}, {"n", testnet::N}}, {});
  const auto created =
      server.call("POST", "/rosters", Json{{"name", "pair"}, {"network", app::network_to_json(net)}});
  if (created.status != 201) return {false, fmt::format("create returned {}", created.status)};
  const std::string id = created.body["id"];
  const Json request = Json::parse(R"({
    "algorithm": "exact",
    "params": {"capacity": {"lo": 1, "hi": 2}, "include_facilitator": false},
    "constraints": {"must_link": [["u", "n"]]}})");
  const auto solved = server.call("POST", "/rosters/" + id + "/solve", request);
  if (solved.status != 200) return {false, fmt::format("solve returned {}", solved.status)};
  const double s = solved.body["success"].get<double>();
  const bool warning = solved.body["deviancy_warning"].get<bool>();
  return {s == -0.25 && warning,
          fmt::format("success {:.17g}, deviancy_warning {}", s, warning)};
}

struct Criterion {
  const char* name;
  Outcome (*run)();
};

constexpr Criterion kCriteria[] = {
    {"tie-table equivalence", tie_table},
    {"closed form vs monte carlo", closed_form_vs_monte_carlo},
    {"exact solver oracle", exact_oracle},
    {"milp consistency", milp_consistency},
    {"baseline ordering", baseline_ordering},
    {"lns vs local search", small_vs_large},
    {"omega ratio monotonicity", omega_monotonicity},
    {"scaling", scaling},
    {"deviancy through api", deviancy_through_api},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  int index = 0;
  for (const Criterion& c : kCriteria) {
    ++index;
    if (!selected.empty() && !selected.contains(index)) continue;
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("threw: {}", e.what())};
    }
    failures += !outcome.pass;
    fmt::print("{} [{}] {}: {} ({:.1f} s)\n", outcome.pass ? "PASS" : "FAIL", index, c.name,
               outcome.detail, seconds_since(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
