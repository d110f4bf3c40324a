#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" ENTTEMP_CLI_PATH "\" " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> numeric_rows(const fs::path& p, std::size_t skip_cols = 0) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t c = 0; std::getline(ls, cell, ','); ++c)
      if (c >= skip_cols) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("enttemp_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

const std::string kSmallPareto = "pareto --model tfi:8 --samples 40 --rounds 10 --chi-max 8 --ground-chi 16";

}  // namespace

TEST_F(CliTest, CheckMethod2Passes) {
  const CliRun r = run("check method2");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  bool found = false;
  ASSERT_EQ(j["suites"].size(), 1u);
  for (const auto& c : j["suites"][0]["checks"])
    if (c["name"] == "cost_m1") {
      found = true;
      EXPECT_DOUBLE_EQ(c["measured"].get<double>(), 0.5);
    }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, CheckWritesReportFile) {
  EXPECT_EQ(run("check scaling --out " + (dir_ / "r.json").string()).code, 0);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir_ / "r.json"))["pass"].get<bool>());
}

TEST_F(CliTest, InvalidInputsExitTwo) {
  EXPECT_EQ(run("check no_such_suite").code, 2);
  EXPECT_EQ(run("scaling -d 0 --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("toy --n 0 --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("pareto --model toy:2 --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("pareto --model bogus:3 --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("pareto --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("--no-such-flag").code, 2);
  EXPECT_EQ(run("check method2", "ENTTEMP_THREADS=zero").code, 2);
  EXPECT_EQ(run("check method2", "ENTTEMP_THREADS=0").code, 2);
}

TEST_F(CliTest, ScalingOneDimensionRatio) {
  ASSERT_EQ(run("scaling -d 1 -c 1 --ds-min 0 --ds-max 2 --points 3 --out " + dir_.string()).code, 0);
  const auto rows = numeric_rows(dir_ / "scaling.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[1][1] / rows[0][1], 64.0, 1e-8);
  EXPECT_NEAR(rows[2][1] / rows[1][1], 64.0, 1e-8);
  EXPECT_TRUE(fs::exists(dir_ / "scaling.svg"));
}

TEST_F(CliTest, ScalingTwoDimensionExponent) {
  ASSERT_EQ(run("scaling -d 2 --ds-min 1 --ds-max 2 --points 2 --out " + dir_.string()).code, 0);
  const auto rows = numeric_rows(dir_ / "scaling.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::log2(rows[1][1] / rows[0][1]), 2.0, 1e-9);
}

TEST_F(CliTest, ToySinglePair) {
  ASSERT_EQ(run("toy --n 1 --out " + dir_.string()).code, 0);
  const auto rows = numeric_rows(dir_ / "toy.csv");
  ASSERT_EQ(rows.size(), 2u);
  // Columns: chi, delta_s0, delta_e.
  EXPECT_NEAR(rows[0][1], 1.0, 1e-12);
  EXPECT_NEAR(rows[0][2], 0.5, 1e-6);
  EXPECT_NEAR(rows[1][1], 0.0, 1e-12);
  EXPECT_NEAR(rows[1][2], 0.0, 1e-12);
}

TEST_F(CliTest, ToyFourPairsIntegerPoints) {
  ASSERT_EQ(run("toy --n 4 --out " + dir_.string()).code, 0);
  const auto rows = numeric_rows(dir_ / "toy.csv");
  ASSERT_EQ(rows.size(), 16u);
  for (const auto& r : rows) {
    const auto chi = static_cast<std::size_t>(r[0]);
    if ((chi & (chi - 1)) == 0) EXPECT_NEAR(r[2], 0.5 * r[1], 1e-6) << "chi " << chi;
  }
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i][2], rows[i - 1][2] + 1e-9);
}

TEST_F(CliTest, ParetoIsDeterministicAndFrontSorted) {
  const fs::path a = dir_ / "a";
  const fs::path b = dir_ / "b";
  ASSERT_EQ(run(kSmallPareto + " --seed 5 --format csv --format json --out " + a.string()).code, 0);
  ASSERT_EQ(run(kSmallPareto + " --seed 5 --format csv --format json --out " + b.string()).code, 0);
  for (const char* f : {"points.csv", "front.csv", "temperature.csv", "points.json", "front.json", "temperature.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_FALSE(fs::exists(a / "front.svg"));
  const auto front = numeric_rows(a / "front.csv", 2);
  ASSERT_FALSE(front.empty());
  for (std::size_t i = 1; i < front.size(); ++i) {
    EXPECT_GE(front[i][0], front[i - 1][0]);
    EXPECT_GE(front[i][1], front[i - 1][1] - 1e-12);
  }
}

TEST_F(CliTest, ParetoThreadCountDoesNotChangeOutput) {
  const fs::path a = dir_ / "a";
  const fs::path b = dir_ / "b";
  ASSERT_EQ(run(kSmallPareto + " --format csv --out " + a.string(), "ENTTEMP_THREADS=1").code, 0);
  ASSERT_EQ(run(kSmallPareto + " --format csv --out " + b.string(), "ENTTEMP_THREADS=3").code, 0);
  EXPECT_EQ(slurp(a / "points.csv"), slurp(b / "points.csv"));
  EXPECT_EQ(slurp(a / "front.csv"), slurp(b / "front.csv"));
}

TEST_F(CliTest, ParetoSeedMatters) {
  const fs::path a = dir_ / "a";
  const fs::path b = dir_ / "b";
  ASSERT_EQ(run(kSmallPareto + " --seed 1 --format csv --out " + a.string()).code, 0);
  ASSERT_EQ(run(kSmallPareto + " --seed 2 --format csv --out " + b.string()).code, 0);
  EXPECT_NE(slurp(a / "points.csv"), slurp(b / "points.csv"));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  {
    std::ofstream cfg(dir_ / "run.ini");
    cfg << "[pareto]\nmodel = tfi:8\nsamples = 30\nrounds = 10\nchi-max = 8\nground-chi = 16\nseed = 9\nformat = csv\n";
  }
  const fs::path a = dir_ / "a";
  const fs::path b = dir_ / "b";
  const fs::path c = dir_ / "c";
  ASSERT_EQ(run("--config " + (dir_ / "run.ini").string() + " pareto --out " + a.string()).code, 0);
  ASSERT_EQ(run("pareto --model tfi:8 --samples 30 --rounds 10 --chi-max 8 --ground-chi 16 --seed 9 --format csv --out " +
                b.string())
                .code,
            0);
  EXPECT_EQ(slurp(a / "points.csv"), slurp(b / "points.csv"));
  // A flag given on the command line wins over the file.
  ASSERT_EQ(run("--config " + (dir_ / "run.ini").string() + " pareto --seed 10 --out " + c.string()).code, 0);
  EXPECT_NE(slurp(a / "points.csv"), slurp(c / "points.csv"));
  const CliRun summary = run("--config " + (dir_ / "run.ini").string() + " pareto --samples 12 --out " + c.string());
  ASSERT_EQ(summary.code, 0);
  EXPECT_EQ(nlohmann::json::parse(summary.out)["seed"], 9);
}
