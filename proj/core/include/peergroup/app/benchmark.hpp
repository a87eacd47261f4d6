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

// Benchmark harness over seeded synthetic rosters. Produces the algorithm
// comparison table plus the small-vs-large neighborhood, omega-ratio and
// scaling series.
//
// Instance i of size n is generate_instance(n, seed + i, user_ratio), so
// every row can be regenerated from its (n, instance_seed) pair. Local
// search always gets the wall time LNS spent on the same instance.

#ifndef PEERGROUP_APP_BENCHMARK_HPP_
#define PEERGROUP_APP_BENCHMARK_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "peergroup/app/io.hpp"
#include "peergroup/model.hpp"
#include "peergroup/solvers.hpp"

namespace peergroup::app {

struct BenchmarkConfig {
  std::vector<int> sizes{30, 40, 50, 60};
  int instances = 25;
  double user_ratio = 0.68;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::kLns, Algorithm::kLocalSearch,
                                    Algorithm::kRandom, Algorithm::kNetwork,
                                    Algorithm::kEvenUsers};
  ModelParams params;
  int restarts = 50;
  double time_limit_seconds = 3600.0;
  int stall_limit = 200;
  int workers = 1;

  bool small_vs_large = true;
  int small_vs_large_n = 30;
  int small_vs_large_instances = 10;

  bool omega_sweep = true;
  int omega_n = 12;
  int omega_instances = 5;
  std::vector<double> omega_values{0.25, 0.5, 0.75, 1.0};
  Algorithm omega_algorithm = Algorithm::kExact;

  bool scaling = true;
  std::vector<int> scaling_sizes{20, 40, 60};
  int scaling_instances = 3;
};

// Keys mirror the struct fields; "algorithms" and "omega_algorithm" take
// algorithm names and "params" a params document. Missing keys keep their
// defaults; unknown keys are rejected.
BenchmarkConfig benchmark_config_from_json(const Json& doc);
Json benchmark_config_to_json(const BenchmarkConfig& config);

struct BenchmarkRow {
  Algorithm algorithm = Algorithm::kLns;
  std::uint64_t instance_seed = 0;
  int n = 0;
  double success = 0.0;
  double expected_nonusers = 0.0;
  double wall_ms = 0.0;
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::kLns;
  int n = 0;
  int count = 0;
  double mean_success = 0.0;
  double stddev_success = 0.0;
  double mean_expected_nonusers = 0.0;
  double mean_wall_ms = 0.0;
  // One-sided paired t-test of LNS success above this algorithm's; NaN for
  // LNS itself or when LNS was not run.
  double p_lns_better = 0.0;
};

struct SmallVsLargeRow {
  std::uint64_t instance_seed = 0;
  int n = 0;
  double budget_ms = 0.0;
  double lns_expected_nonusers = 0.0;
  double local_expected_nonusers = 0.0;
  double lns_success = 0.0;
  double local_success = 0.0;
};

struct OmegaRow {
  std::uint64_t instance_seed = 0;
  int n = 0;
  double omega_user_given_non = 0.0;
  double omega_non_given_user = 0.0;
  double success = 0.0;
  double expected_nonusers = 0.0;
};

struct ScalingRow {
  std::uint64_t instance_seed = 0;
  int n = 0;
  int restarts = 0;
  double median_restart_ms = 0.0;
  double total_ms = 0.0;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  std::vector<BenchmarkRow> rows;
  std::vector<AlgorithmSummary> summaries;
  std::vector<SmallVsLargeRow> small_vs_large;
  std::vector<OmegaRow> omega;
  std::vector<ScalingRow> scaling;
  // Log-log slope of median single-restart time against n; NaN when fewer
  // than two sizes were timed.
  double scaling_exponent = 0.0;
};

using ProgressFn = std::function<void(std::string_view)>;

BenchmarkReport run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress = {});

// LNS run on one instance plus local search under the LNS wall time.
SmallVsLargeRow small_vs_large_run(const SocialNetwork& net, const BenchmarkConfig& config,
                                   std::uint64_t instance_seed, std::uint64_t solver_seed);

std::vector<AlgorithmSummary> summarize(std::span<const BenchmarkRow> rows);

// Least-squares slope of log(y) against log(x).
double power_law_exponent(std::span<const double> x, std::span<const double> y);

// p-value of the one-sided paired t-test H1: mean(a - b) > 0. Returns 0 when
// every difference is equal and positive, 1 when equal and non-positive.
double paired_one_sided_p(std::span<const double> a, std::span<const double> b);

// Header: algo,instance_seed,n,success,expected_nonusers,wall_ms
void write_benchmark_csv(std::span<const BenchmarkRow> rows, std::ostream& out);
void write_small_vs_large_csv(std::span<const SmallVsLargeRow> rows, std::ostream& out);
void write_omega_csv(std::span<const OmegaRow> rows, std::ostream& out);
void write_scaling_csv(std::span<const ScalingRow> rows, std::ostream& out);

Json report_to_json(const BenchmarkReport& report);

// Writes report.json, baseline_comparison.csv, small_vs_large.csv,
// omega_ratio.csv and scaling.csv into `dir` (created when missing).
void write_report(const BenchmarkReport& report, const std::filesystem::path& dir);

}  // namespace peergroup::app

#endif  // PEERGROUP_APP_BENCHMARK_HPP_
