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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "lp_reader.hpp"
#include "networks.hpp"
#include "peergroup/app/io.hpp"
#include "peergroup/app/runner.hpp"
#include "peergroup/instance_gen.hpp"

namespace peergroup {
namespace {

namespace fs = std::filesystem;
using app::Json;
using testnet::N;
using testnet::U;

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.status = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("peergroup_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    app::write_text_file(dir_ / name, text);
    return path(name);
  }

  std::string write_network(const std::string& name, const SocialNetwork& net) const {
    return write(name, app::dump_json(app::network_to_json(net)));
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateMatchesLibrary) {
  const CliRun r = cli({"generate", "--n", "24", "--seed", "3", "-o", path("net.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(app::network_from_json(app::read_json_file(path("net.json"))),
            generate_instance(24, 3));
  const CliRun stdout_run = cli({"generate", "--n", "24", "--seed", "3"});
  EXPECT_EQ(stdout_run.out, slurp(path("net.json")));
}

TEST_F(CliTest, ImportCsv) {
  const auto nodes = write("nodes.csv", "id,behavior\na,user\nb,non_user\n");
  const auto ties = write("ties.csv", "from,to,strength\na,b,strong\n");
  const CliRun r = cli({"import", "--nodes", nodes, "--ties", ties, "-o", path("net.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto net = app::network_from_json(app::read_json_file(path("net.json")));
  EXPECT_EQ(net.nodes.size(), 2u);
  EXPECT_EQ(net.arcs.size(), 1u);
}

TEST_F(CliTest, SeededSolveIsByteIdentical) {
  const auto net = write_network("net.json", generate_instance(30, 2));
  for (const char* name : {"a.json", "b.json"}) {
    const CliRun r = cli({"solve", "--network", net, "--algo", "lns", "--seed", "7", "--restarts",
                       "5", "-o", path(name)});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("expected non-users"), std::string::npos);
  }
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_FALSE(app::read_json_file(path("a.json")).contains("timing"));
}

TEST_F(CliTest, SolveMatchesRequestPath) {
  const auto net = generate_instance(20, 5);
  const auto net_file = write_network("net.json", net);
  const Json request = Json::parse(R"({"algorithm": "local", "seed": 3, "restarts": 4,
                                       "params": {"capacity": {"lo": 3, "hi": 6}}})");
  const auto request_file = write("request.json", request.dump());
  const CliRun r = cli({"solve", "--network", net_file, "--request", request_file, "--json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto parsed = app::request_from_json(request);
  EXPECT_EQ(Json::parse(r.out), app::result_to_json(app::run_solve(net, parsed), parsed.params));

  // Flags override the request file.
  const CliRun seeded = cli({"solve", "--network", net_file, "--request", request_file, "--seed",
                          "4", "--json"});
  EXPECT_EQ(Json::parse(seeded.out)["seed"], 4);
  EXPECT_EQ(Json::parse(seeded.out)["params"]["capacity"]["hi"], 6);
}

TEST_F(CliTest, EvaluateFlagsDeviancy) {
  const auto net = write_network("pair.json", testnet::make({{"u", U}, {"n", N}}, {}));
  const auto part = write("part.json", R"({"assignment": {"u": 0, "n": 0}})");
  const CliRun r = cli({"evaluate", "--network", net, "--partition", part, "--lo", "1", "--hi",
                     "2", "--no-facilitator"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["success"], -0.25);
  EXPECT_EQ(doc["deviancy_warning"], true);

  const CliRun table = cli({"solve", "--network", net, "--algo", "exact", "--lo", "1", "--hi",
                         "2", "--no-facilitator", "--constraints",
                         write("c.json", R"({"must_link": [["u", "n"]]})")});
  ASSERT_EQ(table.status, 0) << table.err;
  EXPECT_NE(table.out.find("WARNING"), std::string::npos);
}

TEST_F(CliTest, SimulateAgreesWithClosedForm) {
  const auto net = generate_instance(30, 6);
  const auto net_file = write_network("net.json", net);
  const auto result_file = path("result.json");
  ASSERT_EQ(cli({"solve", "--network", net_file, "--algo", "random", "-o", result_file}).status,
            0);
  const CliRun r = cli({"simulate", "--network", net_file, "--partition", result_file,
                     "--samples", "100000", "--seed", "2", "--json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["samples"], 100000);
  EXPECT_LE(doc["gap_in_std_errors"].get<double>(), 4.0);
}

TEST_F(CliTest, ExportMilpWritesParsableFiles) {
  const auto net = write_network("tiny.json", generate_instance(5, 1, 0.6, 2, 0.0));
  const CliRun r = cli({"export-milp", "--network", net, "--lo", "2", "--hi", "3", "--out-dir",
                     path("milp"), "--mps"});
  ASSERT_EQ(r.status, 0) << r.err;
  // n = 5 with groups of 2..3 admits exactly S = 2.
  ASSERT_TRUE(fs::exists(dir_ / "milp" / "tiny.2.lp"));
  EXPECT_TRUE(fs::exists(dir_ / "milp" / "tiny.2.mps"));
  const auto lp = oracle::parse_lp(slurp(dir_ / "milp" / "tiny.2.lp"));
  EXPECT_TRUE(lp.maximize);
  EXPECT_FALSE(lp.rows.empty());

  const CliRun bad = cli({"export-milp", "--network", net, "--lo", "2", "--hi", "3", "--s", "4",
                       "--out-dir", path("milp")});
  EXPECT_EQ(bad.status, 2);
}

TEST_F(CliTest, BenchmarkWritesReport) {
  const auto config = write("bench.json", R"({
    "sizes": [12], "instances": 2, "restarts": 2,
    "algorithms": ["lns", "local", "random"],
    "small_vs_large": false, "omega_sweep": false,
    "scaling_sizes": [12, 16], "scaling_instances": 1})");
  const CliRun r = cli({"benchmark", "--config", config, "--out-dir", path("report"), "--quiet"});
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* f : {"report.json", "baseline_comparison.csv", "scaling.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "report" / f)) << f;
  }
  const std::string csv = slurp(dir_ / "report" / "baseline_comparison.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "algo,instance_seed,n,success,expected_nonusers,wall_ms");
}

TEST_F(CliTest, ExitStatuses) {
  const auto net = write_network("net.json", generate_instance(10, 1));
  EXPECT_EQ(cli({"--help"}).status, 0);
  EXPECT_EQ(cli({}).status, 3);
  EXPECT_EQ(cli({"frobnicate"}).status, 3);
  EXPECT_EQ(cli({"solve", "--network", net, "--bogus"}).status, 3);

  const CliRun missing = cli({"solve", "--network", path("missing.json")});
  EXPECT_EQ(missing.status, 3);
  EXPECT_EQ(Json::parse(missing.err)["code"], "bad_input");

  const CliRun infeasible = cli({"solve", "--network", net, "--lo", "6", "--hi", "7"});
  EXPECT_EQ(infeasible.status, 2);
  EXPECT_EQ(Json::parse(infeasible.err)["code"], "infeasible_bounds");

  const auto clash = write("c.json", R"({"must_link": [["v0", "v1"]], "cannot_link": [["v0", "v1"]]})");
  EXPECT_EQ(cli({"solve", "--network", net, "--constraints", clash}).status, 4);
  EXPECT_EQ(cli({"solve", "--network", net, "--algo", "mip"}).status, 3);
  EXPECT_EQ(cli({"solve", "--network", net, "-o", "/nonexistent-dir/out.json"}).status, 1);
}

}  // namespace
}  // namespace peergroup
