#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

// Runs the CLI with `args` and returns its exit status.
int run(const std::string& args) {
  const std::string cmd = std::string(KPROC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("kproc_cli_" + std::string(
        ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("simulate --help"), 0);
}

TEST_F(Cli, EnvSampleIsReproducible) {
  ASSERT_EQ(run("env sample --alpha 0.5 --terms 50 --seed 7 --out " + p("a.json")), 0);
  ASSERT_EQ(run("env sample --alpha 0.5 --terms 50 --seed 7 --out " + p("b.json")), 0);
  ASSERT_EQ(run("env sample --alpha 0.5 --terms 50 --seed 8 --out " + p("c.json")), 0);
  EXPECT_EQ(slurp(p("a.json")), slurp(p("b.json")));
  EXPECT_NE(slurp(p("a.json")), slurp(p("c.json")));
}

TEST_F(Cli, MissingRequiredOptionIsUsageError) {
  EXPECT_EQ(run("env sample --terms 50 --seed 7 --out " + p("a.json")), 2);
  EXPECT_EQ(run("env sample --alpha 1.5 --terms 50 --seed 7 --out " + p("a.json")), 2);
}

TEST_F(Cli, SimulateKProcessLeavesInfinityImmediately) {
  ASSERT_EQ(run("env sample --alpha 0.5 --terms 100 --seed 1 --out " + p("e.json")), 0);
  ASSERT_EQ(run("simulate --model k --env " + p("e.json") + " --horizon 5 --seed 3 --out " + p("path.csv")), 0);
  std::istringstream in(slurp(p("path.csv")));
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (rows > 1) EXPECT_EQ(line.find("inf"), std::string::npos) << line;
  }
  EXPECT_GT(rows, 1);
}

TEST_F(Cli, SimulateTrapModel) {
  EXPECT_EQ(run("simulate --model trap --n 100 --alpha 0.5 --horizon 1 --seed 3 --save-trap-env " + p("t.json") +
                " --out " + p("trap.csv")),
            0);
  EXPECT_TRUE(fs::exists(p("t.json")));
  EXPECT_EQ(run("simulate --model trap --trap-env " + p("t.json") + " --horizon 1 --seed 3 --out " + p("trap2.csv")),
            0);
  EXPECT_EQ(slurp(p("trap.csv")), slurp(p("trap2.csv")));
}

TEST_F(Cli, SimulateRejectsUnknownModel) {
  EXPECT_EQ(run("simulate --model q --horizon 1 --seed 1"), 2);
}

TEST_F(Cli, AgingCurveWritesFiles) {
  ASSERT_EQ(run("aging curve --alpha 0.5 --terms 200 --env-seed 1 --t 0.01 --theta 0 1 --reps 200 --seed 2 "
                "--out-dir " + p("out")),
            0);
  EXPECT_TRUE(fs::exists(p("out/summary.json")));
  EXPECT_TRUE(fs::exists(p("out/lambda_t=0.01.csv")));
  const std::string l0 = slurp(p("out/lambda0.csv"));
  EXPECT_EQ(l0.substr(0, l0.find('\n', l0.find('\n') + 1) + 1), "theta,value,std_error\n0,1,0\n");
}

TEST_F(Cli, AgingCurveRejectsZeroReps) {
  EXPECT_EQ(run("aging curve --alpha 0.5 --terms 20 --env-seed 1 --t 0.01 --theta 1 --reps 0 --seed 2 --out-dir " +
                p("out")),
            2);
}

TEST_F(Cli, VerifyQuadraturePasses) {
  EXPECT_EQ(run("verify --only quadrature --out " + p("r.json")), 0);
  EXPECT_NE(slurp(p("r.json")).find("\"all_pass\": true"), std::string::npos);
}

TEST_F(Cli, VerifyZeroToleranceFails) {
  EXPECT_EQ(run("verify --only 1 --tolerance 0 --out " + p("r.json")), 1);
  EXPECT_NE(slurp(p("r.json")).find("\"all_pass\": false"), std::string::npos);
}

TEST_F(Cli, VerifyReportDoesNotDependOnWorkers) {
  ASSERT_EQ(run("--workers 1 verify --only 5,8 --out " + p("w1.json")), 0);
  ASSERT_EQ(run("--workers 3 verify --only 5,8 --out " + p("w3.json")), 0);
  EXPECT_EQ(slurp(p("w1.json")), slurp(p("w3.json")));
}

TEST_F(Cli, ConfigFileSuppliesOptionsAndFlagsOverride) {
  {
    std::ofstream cfg(p("cfg.json"));
    cfg << R"({"env": {"sample": {"alpha": 0.5, "terms": 30, "seed": 3}}})";
  }
  ASSERT_EQ(run("--config " + p("cfg.json") + " env sample --out " + p("from_cfg.json")), 0);
  ASSERT_EQ(run("env sample --alpha 0.5 --terms 30 --seed 3 --out " + p("direct3.json")), 0);
  EXPECT_EQ(slurp(p("from_cfg.json")), slurp(p("direct3.json")));

  ASSERT_EQ(run("--config " + p("cfg.json") + " env sample --seed 4 --out " + p("override.json")), 0);
  ASSERT_EQ(run("env sample --alpha 0.5 --terms 30 --seed 4 --out " + p("direct4.json")), 0);
  EXPECT_EQ(slurp(p("override.json")), slurp(p("direct4.json")));
}

TEST_F(Cli, MalformedConfigIsUsageError) {
  {
    std::ofstream cfg(p("bad.json"));
    cfg << "{not json";
  }
  EXPECT_EQ(run("--config " + p("bad.json") + " env sample --out " + p("x.json")), 2);
}
