// Copyright 2026 The rrlab Authors
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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "generators.hpp"
#include "rrlab/moves.hpp"

namespace rrlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rrlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("RRLAB_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string put(const std::string& name, const std::string& content) const {
    write_file(path(name), content);
    return path(name);
  }

  Instance small_instance(int n, bool hard_ca1) const {
    Instance inst;
    inst.id = "tiny";
    inst.n_teams = n;
    inst.phased = true;
    if (hard_ca1) {
      // Team 0 never at home in slot 0: the canonical schedule breaks this.
      Constraint c;
      c.hardness = Hardness::Hard;
      c.penalty = 1;
      c.params = Ca1{0, {0}, VenueMode::Home, 0, 0};
      inst.constraints.push_back(c);
    }
    return inst;
  }

  fs::path dir_;
};

TEST_F(CliTest, VersionAndHelp) {
  const auto v = run_cli({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(cli::kToolVersion), std::string::npos);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"nonsense"}).code, 2);
  EXPECT_EQ(run_cli({"validate", "--instance", "x.xml"}).code, 2);
  EXPECT_EQ(run_cli({"solve", "--instance", "x.xml", "--jobs", "0"}).code, 2);
  EXPECT_EQ(run_cli({"footprint", "--metadata", "m.csv", "--algorithm", "A", "--label", "bad"}).code, 2);
}

TEST_F(CliTest, MissingFileIsDomainError) {
  const auto r = run_cli({"validate", "--instance", path("absent.xml"), "--solution", path("absent.sol")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ValidateFeasibleAndInfeasible) {
  const Instance free = small_instance(4, false);
  const Instance tight = small_instance(4, true);
  const Timetable tt = canonical_schedule(4);
  const std::string sol = put("sol.xml", write_solution(tt, free));
  const auto ok = run_cli({"validate", "--instance", put("free.xml", write_instance(free)), "--solution", sol});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("feasible: yes"), std::string::npos);

  // Is team 0 at home in slot 0 in the canonical schedule?
  bool home0 = false;
  for (int a = 1; a < 4; ++a) home0 |= tt.slot(0, a) == 0;
  const auto bad = run_cli({"validate", "--instance", put("tight.xml", write_instance(tight)), "--solution",
                            sol, "--json"});
  EXPECT_EQ(bad.code, home0 ? 1 : 0);
  const json j = json::parse(bad.out);
  EXPECT_EQ(j["feasible"].get<bool>(), !home0);
  EXPECT_EQ(j["structurally_valid"].get<bool>(), true);
}

TEST_F(CliTest, ValidateStructuralViolation) {
  const Instance inst = small_instance(4, false);
  Timetable tt = canonical_schedule(4);
  tt.set_slot(0, 1, Timetable::kUnscheduled);
  const auto r = run_cli({"validate", "--instance", put("i.xml", write_instance(inst)), "--solution",
                          put("s.xml", write_solution(tt, inst)), "--json"});
  EXPECT_EQ(r.code, 1);
  const json j = json::parse(r.out);
  EXPECT_FALSE(j["structurally_valid"].get<bool>());
  EXPECT_FALSE(j["structural_violations"].empty());
}

TEST_F(CliTest, SolveIsReproducibleAndWritesManifest) {
  Rng rng(70);
  const Instance inst = test::random_instance(rng, 6, 5, true);
  const std::string ip = put("inst.xml", write_instance(inst));
  const std::vector<std::string> base = {"solve", "--instance", ip, "--seed", "9", "--budget", "3000,3000,500"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.xml"), "--trace", path("a.csv"), "--json"});
  b.insert(b.end(), {"--out", path("b.xml"), "--trace", path("b.csv"), "--json"});
  const auto ra = run_cli(a), rb = run_cli(b);
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(read_file(path("a.xml")), read_file(path("b.xml")));
  EXPECT_EQ(read_file(path("a.csv")), read_file(path("b.csv")));
  EXPECT_EQ(read_file(path("a.csv")).rfind("evaluations,stage,infeasibility,objective\n", 0), 0u);

  const json m = json::parse(read_file(path("a.xml") + ".manifest.json"));
  for (const char* key : {"subcommand", "inputs", "seed", "config_hash", "tool_version", "started", "finished"})
    EXPECT_TRUE(m.contains(key)) << key;
  EXPECT_EQ(m["subcommand"], "solve");
  EXPECT_EQ(m["seed"].get<std::uint64_t>(), 9u);

  // The written solution validates to the reported totals.
  const json s = json::parse(ra.out);
  EXPECT_FALSE(s.contains("wall_seconds"));
  const auto v = run_cli({"validate", "--instance", ip, "--solution", path("a.xml"), "--json"});
  const json vj = json::parse(v.out);
  EXPECT_EQ(vj["objective"], s["objective"]);
  EXPECT_EQ(vj["feasible"], s["feasible"]);
}

TEST_F(CliTest, SeedFromEnvironment) {
  Rng rng(71);
  const std::string ip = put("inst.xml", write_instance(test::random_instance(rng, 4, 3, false)));
  const std::vector<std::string> args = {"solve", "--instance", ip, "--budget", "500,500,100", "--json"};
  setenv("RRLAB_SEED", "17", 1);
  const auto env = run_cli(args);
  unsetenv("RRLAB_SEED");
  auto flag = args;
  flag.insert(flag.end(), {"--seed", "17"});
  EXPECT_EQ(env.out, run_cli(flag).out);
  setenv("RRLAB_SEED", "not-a-number", 1);
  EXPECT_EQ(run_cli(args).code, 2);
  unsetenv("RRLAB_SEED");
}

TEST_F(CliTest, BadBudgetIsUsageError) {
  Rng rng(72);
  const std::string ip = put("inst.xml", write_instance(test::random_instance(rng, 4, 0, false)));
  EXPECT_EQ(run_cli({"solve", "--instance", ip, "--budget", "1,2"}).code, 2);
  EXPECT_EQ(run_cli({"solve", "--instance", ip, "--budget", "a,b,c"}).code, 2);
}

TEST_F(CliTest, JobsKeepInputOrder) {
  Rng rng(73);
  std::vector<std::string> args = {"solve", "--seed", "3", "--budget", "800,800,100", "--json"};
  for (int i = 0; i < 4; ++i) {
    Instance inst = test::random_instance(rng, 4 + 2 * (i % 2), 3, i % 2 == 0);
    inst.id = "inst" + std::to_string(i);
    args.push_back("--instance");
    args.push_back(put("i" + std::to_string(i) + ".xml", write_instance(inst)));
  }
  auto par = args;
  par.insert(par.end(), {"--jobs", "3"});
  const auto serial = run_cli(args), parallel = run_cli(par);
  ASSERT_EQ(serial.code, 0) << serial.err;
  EXPECT_EQ(serial.out, parallel.out);
  const json j = json::parse(serial.out);
  ASSERT_EQ(j.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(j[i]["id"], "inst" + std::to_string(i));
}

TEST_F(CliTest, ProbeDeterministicWithEvaluationClock) {
  Rng rng(74);
  const std::string ip = put("inst.xml", write_instance(test::random_instance(rng, 6, 6, true)));
  const std::vector<std::string> args = {"probe", "--instance", ip, "--seed", "4", "--time-as-evaluations"};
  const auto a = run_cli(args), b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(json::parse(a.out).is_object());
}

TEST_F(CliTest, FeaturesAndProject) {
  Rng rng(75);
  const std::string ip = put("inst.xml", write_instance(test::random_instance(rng, 6, 8, true)));
  const auto f = run_cli({"features", "--instance", ip, "--out", path("f.json")});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_TRUE(fs::exists(path("f.json.manifest.json")));
  const auto p = run_cli({"project", "--features", path("f.json"), "--model", "problem-type"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(p.out.rfind("z1,z2\n", 0), 0u);
  // The instance model also reads the LP bound, which is never computed.
  const auto pj = run_cli({"project", "--features", path("f.json"), "--model", "instance", "--json"});
  EXPECT_EQ(pj.code, 1);
  EXPECT_NE(pj.err.find("phi_ip_lp_objective"), std::string::npos) << pj.err;
  const auto pt = run_cli({"project", "--features", path("f.json"), "--json"});
  ASSERT_EQ(pt.code, 0) << pt.err;
  const json j = json::parse(pt.out);
  EXPECT_TRUE(j.contains("z1"));
  EXPECT_TRUE(j.contains("z2"));
}

TEST_F(CliTest, PortfolioSharesSumToHundred) {
  Rng rng(76);
  MetadataTable t = test::random_metadata(rng, 40, 5, false);
  // Every instance solved by someone, so the oracle gap is zero.
  for (std::size_t r = 0; r < t.rows.size(); r += 5) {
    t.rows[r].feasible = true;
    t.rows[r].objective = 500;
  }
  const std::string mp = put("meta.csv", write_metadata(t));
  const auto r = run_cli({"portfolio", "--metadata", mp});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Shapley sum: 100.00%"), std::string::npos) << r.out;
  const auto rj = run_cli({"portfolio", "--metadata", mp, "--json"});
  const json j = json::parse(rj.out);
  EXPECT_NEAR(j["shapley_sum_pct"].get<double>(), 100.0, 1e-9);
  double sum = 0;
  for (const auto& a : j["algorithms"]) sum += a["shapley_pct"].get<double>();
  EXPECT_NEAR(sum, 100.0, 1e-9);
}

TEST_F(CliTest, SelectFootprintAndReport) {
  Rng rng(77);
  auto with_z = [&](MetadataTable t) {
    for (auto& [id, fv] : t.feature_rows) fv["z2"] = std::normal_distribution<double>()(rng);
    return write_metadata(t);
  };
  const std::string train = put("train.csv", with_z(test::random_metadata(rng, 60, 4, true)));
  MetadataTable held_out = test::random_metadata(rng, 20, 4, true);
  for (auto& r : held_out.rows) r.instance_id = "held_" + r.instance_id;
  for (auto& f : held_out.feature_rows) f.first = "held_" + f.first;
  const std::string test_csv = put("test.csv", with_z(held_out));
  const auto s = run_cli({"select", "--train", train, "--test", test_csv});
  ASSERT_EQ(s.code, 0) << s.err;
  for (const char* row : {"Percentage feasible", "Percentage best", "Percentage good", "Relative gap"})
    EXPECT_NE(s.out.find(row), std::string::npos);
  const json sj = json::parse(run_cli({"select", "--train", train, "--test", test_csv, "--json"}).out);
  EXPECT_EQ(sj["oracle"]["relative_gap_pct"].get<double>(), 0.0);

  const MetadataTable t = parse_metadata(read_file(train));
  const std::string alg = t.rows.front().algorithm;
  const auto f = run_cli({"footprint", "--metadata", train, "--algorithm", alg, "--grid", "10", "--json"});
  ASSERT_EQ(f.code, 0) << f.err;
  const json fj = json::parse(f.out);
  EXPECT_GE(fj["area"].get<double>(), 0.0);
  EXPECT_LE(fj["purity"].get<double>(), 1.0);
  EXPECT_EQ(run_cli({"footprint", "--metadata", train, "--algorithm", "NoSuchAlgorithm"}).code, 1);

  const auto r = run_cli({"report", "--metadata", train, "--out-dir", path("rep")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* file : {"report.json", "performance.csv", "contributions.csv", "footprints.csv", "points.csv"})
    EXPECT_TRUE(fs::exists(path("rep/") + file)) << file;
}

}  // namespace
}  // namespace rrlab
