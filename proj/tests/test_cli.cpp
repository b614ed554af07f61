#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = epicon::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("epicon_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Cli, Bstar) {
  const auto r = run({"bstar", "--r0", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("b*=0.8216"), std::string::npos);
  EXPECT_NE(r.out.find("W_s=0.250000"), std::string::npos);
  EXPECT_NE(r.out.find("W_d=0.000000"), std::string::npos);
  EXPECT_NE(r.out.find("I_max="), std::string::npos);
}

TEST(Cli, BstarInfeasible) {
  const auto r = run({"bstar", "--r0", "0.8"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("infeasible"), std::string::npos);
}

TEST(Cli, SirPeak) {
  const auto r = run({"sir", "--beta", "0.4", "--gamma", "0.1", "--dt", "0.01", "--policy", "none"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,S,I,R,b");
  double peak = 0.0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (int c = 0; c < 3; ++c) std::getline(row, cell, ',');
    peak = std::max(peak, std::stod(cell));
  }
  EXPECT_GT(peak, 0.4);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"fly"}).code, 2);
  EXPECT_EQ(run({"sir", "--wings", "2"}).code, 2);
  EXPECT_EQ(run({"sir", "--policy", "lockdown"}).code, 2);
  EXPECT_EQ(run({"trial", "--config", "missing.cfg"}).code, 2);
  EXPECT_EQ(run({"sweep", "--range", "r0=1:3:3", "--range", "f=x"}).code, 2);
  EXPECT_EQ(run({"bstar"}).code, 2);
}

TEST_F(CliFiles, TrialReproducible) {
  const auto cfg = dir_ / "t.cfg";
  std::ofstream(cfg) << "n = 30\nradius = 150\nr0 = 20\ns0 = 0.9\ni0 = 0.1\nhorizon = 300\n"
                        "policy = static_global\npruning = absolute:14\n";
  const auto a = dir_ / "a.csv", b = dir_ / "b.csv";
  const auto ra = run({"trial", "--config", cfg.string(), "--seed", "4", "--out", a.string()});
  const auto rb = run({"trial", "--config", cfg.string(), "--seed", "4", "--out", b.string()});
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).substr(0, 55), "k,S,I,R,neg_ratio,x_min_regular,x_max_regular,spread\n0,");
  EXPECT_NE(ra.out.find("verdict=success"), std::string::npos);
}

TEST_F(CliFiles, TrialBadConfig) {
  const auto cfg = dir_ / "bad.cfg";
  std::ofstream(cfg) << "n = 30\ncolour = red\n";
  const auto r = run({"trial", "--config", cfg.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST_F(CliFiles, SweepWritesCsvAndMeta) {
  const auto cfg = dir_ / "s.cfg";
  std::ofstream(cfg) << "n = 20\nradius = 150\ns0 = 0.9\ni0 = 0.1\nhorizon = 200\n"
                        "policy = static_global\npruning = absolute:5\n";
  const auto out = dir_ / "s.csv";
  const auto r = run({"sweep", "--config", cfg.string(), "--trials", "2", "--quiet", "--range",
                      "r0=2:4:2", "--range", "f=1:7:2", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(out));
  std::string line;
  int rows = 0;
  std::getline(csv, line);
  EXPECT_EQ(line, "axis1,axis2,success_rate,trials,mean_peak_I,lemma1,lemma2,eq24");
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 4);
  const auto meta = slurp(fs::path(out.string() + ".meta"));
  EXPECT_NE(meta.find("axis1 = r0"), std::string::npos);
  EXPECT_NE(meta.find("trials = 2"), std::string::npos);
}

TEST(Cli, Compare) {
  const auto r = run({"compare", "--r0-range", "2:19:2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "r0,policy,i_max,k_below");
  EXPECT_NE(r.out.find("19,fixed_0.5,0.66"), std::string::npos);
}
