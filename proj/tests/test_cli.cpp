#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "bezgcd_test_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(BEZGCD_CLI_PATH) + " " + args + " >" + (work / "stdout.txt").string() +
                          " 2>" + (work / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Drops the trailing time column of a rows.csv file.
std::string rows_without_time(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    fs::remove_all(work);
    fs::create_directories(work);
  }
};

}  // namespace

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run("gen --m 10 --n 10 --d 3 --e 0.01 --count 4 --seed 1 --out " + (work / "a").string()), 0);
  ASSERT_EQ(run("gen --m 10 --n 10 --d 3 --e 0.01 --count 4 --seed 1 --out " + (work / "b").string()), 0);
  for (const char* name : {"instance_00000.json", "instance_00003.json", "manifest.json"})
    EXPECT_EQ(slurp(work / "a" / name), slurp(work / "b" / name)) << name;
  const auto manifest = nlohmann::json::parse(slurp(work / "a" / "manifest.json"));
  EXPECT_EQ(manifest["files"].size(), 4u);
  EXPECT_EQ(manifest["m"], 10);
}

TEST_F(Cli, SolveExactInstance) {
  ASSERT_EQ(run("gen --m 6 --n 3 --d 2 --e 0 --count 1 --seed 5 --out " + work.string()), 0);
  const fs::path result = work / "result.json";
  EXPECT_EQ(run("solve --input " + (work / "instance_00000.json").string() + " --out " + result.string()), 0);
  const auto j = nlohmann::json::parse(slurp(result));
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_LE(j["perturbation"].get<double>(), 1e-8);
  EXPECT_EQ(j["gcd"].size(), 3u);
}

TEST_F(Cli, SolveToStdout) {
  ASSERT_EQ(run("gen --m 5 --n 2 --d 1 --e 0 --count 1 --seed 2 --out " + work.string()), 0);
  EXPECT_EQ(run("solve --input " + (work / "instance_00000.json").string()), 0);
  const auto j = nlohmann::json::parse(slurp(work / "stdout.txt"));
  EXPECT_TRUE(j.contains("gcd"));
}

TEST_F(Cli, SolveNonConvergenceExitsTwo) {
  ASSERT_EQ(run("gen --m 8 --n 4 --d 3 --e 0.5 --count 1 --seed 3 --out " + work.string()), 0);
  EXPECT_EQ(run("solve --input " + (work / "instance_00000.json").string() + " --epsilon 1e-300 --max-iter 2"), 2);
}

TEST_F(Cli, SolveMalformedJsonExitsOne) {
  std::ofstream(work / "bad.json") << "{ \"m\": ";
  EXPECT_EQ(run("solve --input " + (work / "bad.json").string()), 1);
  EXPECT_NE(slurp(work / "stderr.txt").find("parse error"), std::string::npos);
}

TEST_F(Cli, SolveInvalidProblemExitsOne) {
  std::ofstream(work / "p.json") << R"({"m": 2, "n": 2, "d": 2, "polys": [[-1, 0, 1], [1, 1]]})";
  EXPECT_EQ(run("solve --input " + (work / "p.json").string()), 1);
}

TEST_F(Cli, BadFlagsExitOne) {
  EXPECT_EQ(run("solve"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("gen --d 20 --out " + work.string()), 1);
}

TEST_F(Cli, BenchJobsDoNotChangeRows) {
  const std::string groups = "--groups 6:2:4:0.01:8 6:3:4:0.01:8 --seed 9";
  ASSERT_EQ(run("bench " + groups + " --jobs 1 --out " + (work / "j1").string()), 0);
  ASSERT_EQ(run("bench " + groups + " --jobs 8 --out " + (work / "j8").string()), 0);
  EXPECT_EQ(rows_without_time(work / "j1" / "rows.csv"), rows_without_time(work / "j8" / "rows.csv"));
  const std::string summary = slurp(work / "j1" / "summary.csv");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 3);
}
