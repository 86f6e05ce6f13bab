// End-to-end tests of the command-line tool, driven through std::system.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "tvn/io.hpp"
#include "tvn/tensor.hpp"
#include "tvn/vn.hpp"

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tvn_cli_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI with the given arguments; stdout/stderr land in log_.
  int run(const std::string& args) {
    const std::string log = path("cli_log.txt");
    const std::string cmd = std::string(TVN_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    log_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  void write_two_block_spec(const std::string& p, std::uint64_t seed = 7) {
    tvn::BlockDiagonalSpec spec;
    spec.ambient_shape = {4, 4, 4};
    spec.block_shapes = {{2, 2, 2}, {1, 1, 1}};
    spec.ratios = {3.0, 1.0};
    spec.seed = seed;
    tvn::write_block_spec(spec, p);
  }

  fs::path dir_;
  std::string log_;
};

}  // namespace

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("--bogus-flag"), 2);
  EXPECT_EQ(run("check --x a.json"), 2);          // missing required --y
  EXPECT_EQ(run("frobnicate --input a.json"), 2); // unknown subcommand
}

TEST_F(CliTest, VersionAndHelp) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("--version"), 0);
}

TEST_F(CliTest, MissingFileExitsOne) {
  EXPECT_EQ(run("spectrum --input " + path("nope.json") + " --mode 1"), 1);
}

TEST_F(CliTest, SpectrumAndModeRange) {
  tvn::write_tensor(tvn::DenseTensor({2, 2}, {3, 0, 4, 0}), path("x.json"));
  EXPECT_EQ(run("spectrum --input " + path("x.json") + " --mode 1"), 0);
  EXPECT_NE(log_.find("5"), std::string::npos);
  EXPECT_EQ(run("spectrum --input " + path("x.json") + " --mode 9"), 1);
  EXPECT_NE(log_.find("out of range"), std::string::npos);
}

TEST_F(CliTest, MatricizeWritesTwoModeFile) {
  tvn::write_tensor(tvn::DenseTensor({2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8}), path("x.json"));
  EXPECT_EQ(run("matricize --input " + path("x.json") + " --mode 2 --output " + path("m.json")), 0);
  const tvn::DenseTensor m = tvn::read_tensor(path("m.json"));
  EXPECT_EQ(m.shape(), (std::vector<int>{2, 4}));
  EXPECT_EQ(m.data(), (std::vector<double>{1, 5, 2, 6, 3, 7, 4, 8}));
  // stdout variant
  EXPECT_EQ(run("matricize --input " + path("x.json") + " --mode 1"), 0);
  EXPECT_NE(log_.find("\"shape\":[2,4]"), std::string::npos);
}

TEST_F(CliTest, HosvdWritesFactorsAndSpectra) {
  tvn::write_tensor(tvn::DenseTensor({2, 2, 2}, {3, 0, 0, 0, 0, 0, 0, 1}), path("x.json"));
  EXPECT_EQ(run("hosvd --input " + path("x.json") + " --output-dir " + path("h")), 0);
  EXPECT_TRUE(fs::exists(path("h/core.json")));
  EXPECT_TRUE(fs::exists(path("h/factor_1.json")));
  EXPECT_TRUE(fs::exists(path("h/factor_2.json")));
  EXPECT_TRUE(fs::exists(path("h/factor_3.json")));
  EXPECT_TRUE(fs::exists(path("h/spectra.json")));
  const std::string spectra = slurp(path("h/spectra.json"));
  EXPECT_NE(spectra.find("\"ranks\":[2,2,2]"), std::string::npos);
}

TEST_F(CliTest, CheckSelfPairEqualityExitZero) {
  tvn::write_tensor(tvn::DenseTensor({2, 2}, {1, 2, 3, 4}), path("x.json"));
  EXPECT_EQ(run("check --x " + path("x.json") + " --y " + path("x.json")), 0);
  EXPECT_NE(log_.find("equality_all_modes = yes"), std::string::npos);
}

TEST_F(CliTest, CheckStrictPairStillExitsZero) {
  // The inequality holds strictly; only violations give a nonzero exit.
  std::vector<double> e1(8, 0.0), e2(8, 0.0);
  e1[0] = 1.0;
  e2[7] = 1.0;
  tvn::write_tensor(tvn::DenseTensor({2, 2, 2}, e1), path("x.json"));
  tvn::write_tensor(tvn::DenseTensor({2, 2, 2}, e2), path("y.json"));
  EXPECT_EQ(run("check --x " + path("x.json") + " --y " + path("y.json")), 0);
  EXPECT_NE(log_.find("equality_all_modes = no"), std::string::npos);
}

TEST_F(CliTest, CheckWritesReport) {
  tvn::write_tensor(tvn::DenseTensor({2, 2}, {1, 2, 3, 4}), path("x.json"));
  EXPECT_EQ(run("check --x " + path("x.json") + " --y " + path("x.json") + " --report " +
                path("report.json")),
            0);
  const tvn::ReportFile rf = tvn::read_report(path("report.json"));
  EXPECT_TRUE(rf.report.equality_all_modes);
  EXPECT_EQ(rf.x_sha256, tvn::sha256_file_hex(path("x.json")));
  EXPECT_EQ(rf.x_sha256.size(), 64u);
}

TEST_F(CliTest, WitnessCheckExtractPipeline) {
  write_two_block_spec(path("spec.json"));
  EXPECT_EQ(run("witness --spec " + path("spec.json") + " --output-dir " + path("w")), 0);
  EXPECT_TRUE(fs::exists(path("w/x.json")));
  EXPECT_TRUE(fs::exists(path("w/y.json")));
  EXPECT_TRUE(fs::exists(path("w/witness.json")));

  EXPECT_EQ(run("check --x " + path("w/x.json") + " --y " + path("w/y.json") + " --tol 1e-8"), 0);
  EXPECT_NE(log_.find("equality_all_modes = yes"), std::string::npos);

  EXPECT_EQ(run("extract --x " + path("w/x.json") + " --y " + path("w/y.json") +
                " --output-dir " + path("e")),
            0);
  const tvn::EqualityWitness w = tvn::read_witness(path("e"));
  ASSERT_EQ(w.ratios.size(), 2u);
  EXPECT_NEAR(w.ratios[0], 3.0, 1e-6 * 3.0);
  EXPECT_NEAR(w.ratios[1], 1.0, 1e-6);
}

TEST_F(CliTest, ExtractPreconditionExitFour) {
  tvn::write_tensor(tvn::DenseTensor({2, 2}, {1, 2, 3, 4}), path("x.json"));
  tvn::write_tensor(tvn::DenseTensor({2, 2}, {4, 3, 2, 1}), path("y.json"));
  EXPECT_EQ(run("extract --x " + path("x.json") + " --y " + path("y.json") + " --output-dir " +
                path("e")),
            4);
}

TEST_F(CliTest, ExtractDegeneracyExitFive) {
  tvn::write_tensor(tvn::DenseTensor({2, 2}, {1, 0, 0, 0}), path("x.json"));
  tvn::write_tensor(tvn::DenseTensor({2, 2}, {1, 0, 0, 1}), path("y.json"));
  EXPECT_EQ(run("extract --x " + path("x.json") + " --y " + path("y.json") + " --output-dir " +
                path("e")),
            5);
}

TEST_F(CliTest, WitnessSeedPriority) {
  write_two_block_spec(path("spec.json"), 7);
  EXPECT_EQ(run("witness --spec " + path("spec.json") + " --output-dir " + path("w1")), 0);
  EXPECT_EQ(run("witness --spec " + path("spec.json") + " --output-dir " + path("w2")), 0);
  // Same seed: byte-identical outputs.
  EXPECT_EQ(slurp(path("w1/x.json")), slurp(path("w2/x.json")));
  EXPECT_EQ(slurp(path("w1/witness.json")), slurp(path("w2/witness.json")));

  // Flag overrides the spec seed.
  EXPECT_EQ(run("witness --spec " + path("spec.json") + " --seed 9 --output-dir " + path("w3")), 0);
  EXPECT_NE(slurp(path("w1/x.json")), slurp(path("w3/x.json")));

  // Environment variable fills in when the flag is absent.
  const std::string log = path("cli_log.txt");
  const std::string cmd = std::string("TVN_SEED=9 ") + TVN_CLI_PATH + " witness --spec " +
                          path("spec.json") + " --output-dir " + path("w4") + " > " + log +
                          " 2>&1";
  ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
  EXPECT_EQ(slurp(path("w3/x.json")), slurp(path("w4/x.json")));
}
