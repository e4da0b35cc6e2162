#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "artifacts.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("dysonlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "dysonlab");
    out_.str("");
    err_.str("");
    return dysoncli::run(args, out_, err_);
  }
  std::string dir(const std::string& name) const { return (root_ / name).string(); }
  static std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  }

  fs::path root_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, KernelEvalSineOnThreePointMesh) {
  ASSERT_EQ(run({"--out", dir("k"), "kernel-eval", "sine", "--mesh", "0,1,2"}), 0) << err_.str();
  std::istringstream is(slurp(root_ / "k" / "kernel.csv"));
  std::string line;
  int row = 0;
  while (std::getline(is, line)) {
    std::vector<double> vals;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    ASSERT_EQ(vals.size(), 3u);
    EXPECT_NEAR(vals[static_cast<std::size_t>(row)], 1.0 / std::numbers::pi, 1e-16);
    ++row;
  }
  EXPECT_EQ(row, 3);
}

TEST_F(CliTest, InvalidBetaNamesTheField) {
  EXPECT_EQ(run({"--out", dir("bad"), "simulate", "--beta", "-1"}), 2);
  EXPECT_NE(err_.str().find("beta"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "bad"));
  EXPECT_EQ(run({"--out", dir("bad"), "sample-gibbs", "--beta", "0"}), 2);
  EXPECT_NE(err_.str().find("beta"), std::string::npos);
}

TEST_F(CliTest, SameSpecAndSeedGiveIdenticalData) {
  const std::vector<std::string> spec{"simulate", "--n", "5", "--horizon", "0.1", "--paths", "4", "--seed", "9"};
  auto a = spec, b = spec;
  a.insert(a.begin(), {"--out", dir("a")});
  b.insert(b.begin(), {"--out", dir("b")});
  ASSERT_EQ(run(a), 0) << err_.str();
  ASSERT_EQ(run(b), 0) << err_.str();
  const auto ma = nlohmann::json::parse(slurp(root_ / "a" / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(root_ / "b" / "manifest.json"));
  EXPECT_EQ(ma["files"], mb["files"]);
  for (const auto& f : ma["files"]) {
    const auto name = f["name"].get<std::string>();
    EXPECT_EQ(dysoncli::sha256_hex(slurp(root_ / "a" / name)), f["sha256"].get<std::string>());
  }
  EXPECT_EQ(ma["seed"], 9);
  EXPECT_EQ(ma["format_version"], 1);
  EXPECT_EQ(ma["spec"]["n"], "5");
  EXPECT_EQ(ma["spec"]["paths"], "4");
}

TEST_F(CliTest, ManifestConfigReproducesTheRun) {
  ASSERT_EQ(run({"--out", dir("a"), "sample-gibbs", "--method", "tridiag", "--n", "6", "--count", "20", "--seed",
                 "4"}),
            0);
  const auto m = nlohmann::json::parse(slurp(root_ / "a" / "manifest.json"));
  {
    std::ofstream os(root_ / "cfg.ini");
    os << m["config"].get<std::string>();
  }
  ASSERT_EQ(run({"--config", dir("cfg.ini"), "--out", dir("b"), "sample-gibbs"}), 0) << err_.str();
  EXPECT_EQ(slurp(root_ / "a" / "samples.csv"), slurp(root_ / "b" / "samples.csv"));
}

TEST_F(CliTest, FailedRunLeavesNoOutputs) {
  {
    std::ofstream os(root_ / "start.csv");
    os << "x\n0\n0.001\n";
  }
  const int rc = run({"--out", dir("f"), "simulate", "--n", "2", "--init", "file", "--init-file", dir("start.csv"),
                      "--dt", "0.5", "--horizon", "0.5", "--max-halvings", "0"});
  EXPECT_EQ(rc, 1);
  EXPECT_NE(err_.str().find("step control"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "f"));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  ::setenv("DYSONLAB_OUT", dir("env").c_str(), 1);
  const int rc = run({"audit", "--kind", "A5"});
  ::unsetenv("DYSONLAB_OUT");
  ASSERT_EQ(rc, 0) << err_.str();
  EXPECT_TRUE(fs::exists(root_ / "env" / "audit.csv"));
  EXPECT_TRUE(fs::exists(root_ / "env" / "manifest.json"));
}

TEST_F(CliTest, SamplesFeedStats) {
  ASSERT_EQ(run({"--out", dir("g"), "sample-gibbs", "--method", "tridiag", "--n", "50", "--count", "300", "--scaling",
                 "hermite"}),
            0);
  ASSERT_EQ(run({"--out", dir("s"), "stats", "--input", dir("g/samples.csv"), "--kind", "semicircle", "--n", "50"}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(slurp(root_ / "s" / "stats.json"));
  EXPECT_LT(j["ks"].get<double>(), 0.03);
  EXPECT_EQ(run({"--out", dir("s2"), "stats", "--input", dir("g/samples.csv"), "--kind", "nope"}), 2);
  EXPECT_NE(err_.str().find("kind"), std::string::npos);
}

TEST_F(CliTest, ExperimentWritesResults) {
  ASSERT_EQ(run({"--out", dir("e"), "experiment", "AC8", "AC12"}), 0) << err_.str();
  const auto j = nlohmann::json::parse(slurp(root_ / "e" / "results.json"));
  ASSERT_EQ(j["results"].size(), 2u);
  EXPECT_TRUE(j["results"][0]["pass"].get<bool>());
  EXPECT_EQ(run({"--out", dir("x"), "experiment", "AC0"}), 2);
}

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(dysoncli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
