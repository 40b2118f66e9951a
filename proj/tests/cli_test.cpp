// SPDX-License-Identifier: Apache-2.0
// Runs the command-line binary end to end.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "gblocks/block_instance.hpp"
#include "gblocks/io.hpp"

namespace gblocks::cli {
namespace {

struct CliRun {
  int status = -1;
  io::Json report;
};

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "gblocks_cli_" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = temp_path(name);
  std::ofstream(path) << text;
  return path;
}

CliRun run(const std::string& args) {
  std::string out = temp_path("out.json");
  std::remove(out.c_str());
  std::string cmd = std::string(GBLOCKS_CLI_PATH) + " " + args + " --out " + out + " 2>/dev/null";
  int raw = std::system(cmd.c_str());
  CliRun r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out);
  if (in) r.report = io::Json::parse(in);
  return r;
}

TEST(CliTest, VerifyGrowthExample) {
  CliRun r = run("verify-paper-example --n 10");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.report["kernel_ok"], true);
  EXPECT_EQ(r.report["decomposition_ok"], true);
  EXPECT_EQ(r.report["parts"], 11);
}

TEST(CliTest, CheckGraverOnWitnessFile) {
  CliRun r = run(std::string("check-graver --in ") + GBLOCKS_DATA_DIR + "/h0_witness_n3.json");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.report["is_graver"], true);
}

TEST(CliTest, InfeasibleSolveExitsOne) {
  std::string path = write_temp("infeasible.json", R"({"C": [[0]], "B": [[0]], "A": [[[0]]], "D": [[[1]]],
      "rhs": [0, 1], "lower": [-2, -2], "upper": [2, 2]})");
  CliRun r = run("solve --in " + path);
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.report["status"], "infeasible");
}

TEST(CliTest, MalformedJsonExitsTwo) {
  std::string path = write_temp("malformed.json", "{\"C\": [1");
  CliRun r = run("solve --in " + path);
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.report["status"], "input_error");
  EXPECT_NE(r.report["error"].get<std::string>().find("line"), std::string::npos);
}

TEST(CliTest, UnknownSubcommandExitsTwo) { EXPECT_EQ(run("no-such-command").status, 2); }

TEST(CliTest, NodeCapExitsThree) {
  CliRun gen = run("random-instance --seed 3");
  ASSERT_EQ(gen.status, 0);
  std::string path = write_temp("capped.json", gen.report["instance"].dump());
  CliRun r = run("solve --node-cap 1 --in " + path);
  EXPECT_EQ(r.status, 3);
  EXPECT_EQ(r.report["status"], "resource_limit");
}

TEST(CliTest, SolveMatchesOracleAndReportsReparse) {
  for (int seed = 1; seed <= 15; ++seed) {
    CliRun gen = run("random-instance --seed " + std::to_string(seed));
    ASSERT_EQ(gen.status, 0);
    std::string path = write_temp("random.json", gen.report["instance"].dump());
    BlockInstance inst = io::instance_from(io::read_file(path));
    CliRun s = run("solve --in " + path);
    CliRun o = run("oracle --in " + path);
    ASSERT_EQ(s.status, o.status) << "seed " << seed;
    ASSERT_TRUE(s.status == 0 || s.status == 1);
    if (s.status != 0) continue;
    EXPECT_EQ(s.report["objective"], o.report["objective"]) << "seed " << seed;
    BlockVector x = io::block_vector_from(s.report["solution"]);
    EXPECT_TRUE(is_feasible(inst, x));
    EXPECT_EQ(objective_value(inst, x), s.report["objective"].get<Int>());
    EXPECT_TRUE(s.report["report"]["objective_trace"].is_array());
  }
}

TEST(CliTest, WallTimeOnlyWhenRequested) {
  CliRun gen = run("random-instance --seed 4");
  std::string path = write_temp("walltime.json", gen.report["instance"].dump());
  CliRun plain = run("solve --in " + path);
  CliRun timed = run("solve --wall-time --in " + path);
  if (plain.status != 0) GTEST_SKIP() << "instance is infeasible";
  EXPECT_FALSE(plain.report["report"].contains("wall_seconds"));
  EXPECT_TRUE(timed.report["report"].contains("wall_seconds"));
}

TEST(CliTest, RejectionScheduling) {
  std::string path = write_temp("rejection.json", R"({"variant": "rejection", "m": 2, "k": 1, "N": [3],
      "p": [[1], [1]], "u": [10]})");
  CliRun r = run("sched-rejection --brute-force --in " + path);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.report["objective"], 2);
  EXPECT_EQ(r.report["brute_force_objective"], 2);
}

TEST(CliTest, BicriteriaScheduling) {
  std::string path = write_temp("bicriteria.json", R"({"variant": "bicriteria", "m": 1, "k": 1, "N": [2],
      "p": [[1]], "w": [1], "theta": 1})");
  CliRun r = run("sched-bicriteria --in " + path);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.report["objective"], 5);
}

TEST(CliTest, SteinitzReport) {
  std::string path = write_temp("steinitz.json", R"({"vectors": [[1], [1], [-1], [-1]]})");
  CliRun r = run("steinitz --in " + path);
  EXPECT_EQ(r.status, 0);
  ASSERT_TRUE(r.report.contains("order"));
  EXPECT_LE(r.report["scaled_deviation"].get<Int>(), r.report["scaled_bound"].get<Int>());
}

}  // namespace
}  // namespace gblocks::cli
