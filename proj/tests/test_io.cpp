#include "tvn/io.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "test_util.hpp"
#include "tvn/version.hpp"
#include "tvn/vn.hpp"

using tvn::DenseTensor;
using namespace tvn::testing;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("tvn_io_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  static void spit(const std::string& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(IoTest, TensorRoundTripIsExact) {
  // Values chosen to stress the decimal formatting.
  const DenseTensor x({2, 3}, {0.1, -0.0, 1.0 / 3.0, 1e-300, 6.02214076e23, -7.5});
  write_tensor(x, path("t.json"));
  const DenseTensor back = tvn::read_tensor(path("t.json"));
  EXPECT_EQ(back.shape(), x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(back.flat(i), x.flat(i)) << "entry " << i;
  }
}

TEST_F(IoTest, TensorWriteIsByteDeterministic) {
  const DenseTensor x = random_tensor({3, 4, 2}, 17);
  write_tensor(x, path("a.json"));
  write_tensor(x, path("b.json"));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(IoTest, ReadTensorExamples) {
  spit(path("eye.json"), R"({"shape":[2,2],"data":[1,0,0,1]})");
  const DenseTensor eye = tvn::read_tensor(path("eye.json"));
  EXPECT_DOUBLE_EQ(eye.at({1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(eye.at({2, 1}), 0.0);

  spit(path("bad_len.json"), R"({"shape":[2],"data":[1,2,3]})");
  EXPECT_THROW(tvn::read_tensor(path("bad_len.json")), tvn::ValidationError);

  spit(path("cube.json"), R"({"shape":[2,2,2],"data":[1,2,3,4,5,6,7,8]})");
  EXPECT_EQ(tvn::read_tensor(path("cube.json")).data(), iota_tensor({2, 2, 2}).data());
}

TEST_F(IoTest, ParseErrorsNamePositions) {
  spit(path("broken.json"), "{\"shape\":[2,2],\n\"data\":[1,0,0,");
  try {
    tvn::read_tensor(path("broken.json"));
    FAIL() << "expected ParseError";
  } catch (const tvn::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.json"), std::string::npos);
  }
  EXPECT_THROW(tvn::read_tensor(path("missing.json")), tvn::IoError);
  spit(path("no_shape.json"), R"({"data":[1]})");
  EXPECT_THROW(tvn::read_tensor(path("no_shape.json")), tvn::ParseError);
  spit(path("float_shape.json"), R"({"shape":[2.5],"data":[1,2]})");
  EXPECT_THROW(tvn::read_tensor(path("float_shape.json")), tvn::ParseError);
}

TEST_F(IoTest, MatrixRoundTrip) {
  const tvn::Matrix m = random_matrix(3, 2, 5);
  tvn::write_matrix(m, path("m.json"));
  const tvn::Matrix back = tvn::read_matrix(path("m.json"));
  EXPECT_EQ(back.rows(), 3);
  EXPECT_EQ(back.cols(), 2);
  EXPECT_EQ(back.entries(), m.entries());

  tvn::write_tensor(iota_tensor({2, 2, 2}), path("cube.json"));
  EXPECT_THROW(tvn::read_matrix(path("cube.json")), tvn::ValidationError);
}

TEST_F(IoTest, BlockSpecRoundTrip) {
  tvn::BlockDiagonalSpec spec;
  spec.ambient_shape = {4, 4, 4};
  spec.block_shapes = {{2, 2, 2}, {1, 1, 1}};
  spec.ratios = {2.5, 1.0};
  spec.seed = 42;
  tvn::write_block_spec(spec, path("spec.json"));
  const auto back = tvn::read_block_spec(path("spec.json"));
  EXPECT_EQ(back.ambient_shape, spec.ambient_shape);
  EXPECT_EQ(back.block_shapes, spec.block_shapes);
  EXPECT_EQ(back.ratios, spec.ratios);
  EXPECT_EQ(back.seed, spec.seed);

  spit(path("bad_spec.json"), R"({"ambient_shape":[2],"block_shapes":[[1]],"ratios":[-1]})");
  EXPECT_THROW(tvn::read_block_spec(path("bad_spec.json")), tvn::ValidationError);
  spit(path("neg_seed.json"),
       R"({"ambient_shape":[2],"block_shapes":[[1]],"ratios":[1],"seed":-3})");
  EXPECT_THROW(tvn::read_block_spec(path("neg_seed.json")), tvn::ParseError);
}

TEST_F(IoTest, ReportRoundTripAndDigits) {
  tvn::VnReport rep;
  rep.lhs = 1.0 / 3.0;
  rep.rhs_per_mode = {0.5, 2.0 / 3.0};
  rep.gap_per_mode = {0.5 - 1.0 / 3.0, 1.0 / 3.0};
  rep.equality_per_mode = {false, true};
  rep.equality_all_modes = false;
  rep.tol = 1e-9;
  rep.scale = 1.2345678901234567;

  tvn::ReportFile rf{rep, tvn::kVersion, "x.json", "y.json", std::string(64, 'a'),
                     std::string(64, 'b')};
  tvn::write_report(rf, path("report.json"));
  const tvn::ReportFile back = tvn::read_report(path("report.json"));

  EXPECT_EQ(back.version, tvn::kVersion);
  EXPECT_EQ(back.x_path, "x.json");
  EXPECT_EQ(back.y_sha256, std::string(64, 'b'));
  EXPECT_EQ(back.report.lhs, rep.lhs);
  EXPECT_EQ(back.report.rhs_per_mode, rep.rhs_per_mode);
  EXPECT_EQ(back.report.gap_per_mode, rep.gap_per_mode);
  EXPECT_EQ(back.report.equality_per_mode, rep.equality_per_mode);
  EXPECT_EQ(back.report.tol, rep.tol);
  EXPECT_EQ(back.report.scale, rep.scale);

  // Gap values carry 17 significant digits.
  const std::string text = slurp(path("report.json"));
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
}

TEST_F(IoTest, WitnessRoundTrip) {
  tvn::BlockDiagonalSpec spec;
  spec.ambient_shape = {4, 4, 4};
  spec.block_shapes = {{2, 2, 2}, {1, 1, 1}};
  spec.ratios = {3.0, 1.0};
  spec.seed = 7;
  const auto pair = tvn::construct_equality_pair(spec);
  tvn::write_witness(pair.witness, (dir_ / "w").string());
  const tvn::EqualityWitness back = tvn::read_witness((dir_ / "w").string());

  EXPECT_EQ(back.ratios, pair.witness.ratios);
  EXPECT_EQ(back.block_shapes, pair.witness.block_shapes);
  EXPECT_EQ(back.dx.data(), pair.witness.dx.data());
  EXPECT_EQ(back.dy.data(), pair.witness.dy.data());
  ASSERT_EQ(back.factors_w.size(), 3u);
  for (int d = 0; d < 3; ++d) {
    EXPECT_EQ(back.factors_w[d].entries(), pair.witness.factors_w[d].entries());
  }
  ASSERT_TRUE(back.seed.has_value());
  EXPECT_EQ(*back.seed, 7u);
  EXPECT_TRUE(back.permutations.empty());

  // Extracted witnesses carry permutations and no seed.
  const tvn::EqualityWitness ext = tvn::extract_equality_structure(pair.x, pair.y, 1e-8);
  tvn::write_witness(ext, (dir_ / "e").string());
  const tvn::EqualityWitness ext_back = tvn::read_witness((dir_ / "e").string());
  EXPECT_EQ(ext_back.permutations, ext.permutations);
  EXPECT_EQ(ext_back.permutations.size(), 3u);
  EXPECT_FALSE(ext_back.seed.has_value());
  EXPECT_EQ(ext_back.ratios, ext.ratios);
}

TEST_F(IoTest, Sha256KnownVectors) {
  spit(path("empty.bin"), "");
  EXPECT_EQ(tvn::sha256_file_hex(path("empty.bin")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  spit(path("abc.bin"), "abc");
  EXPECT_EQ(tvn::sha256_file_hex(path("abc.bin")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_THROW(tvn::sha256_file_hex(path("nope.bin")), tvn::IoError);
}

TEST_F(IoTest, WriteToUnwritablePathFails) {
  const DenseTensor x = iota_tensor({2, 2});
  EXPECT_THROW(tvn::write_tensor(x, (dir_ / "no_dir" / "t.json").string()), tvn::IoError);
}
