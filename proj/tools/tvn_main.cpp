#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tvn/hosvd.hpp"
#include "tvn/io.hpp"
#include "tvn/tensor.hpp"
#include "tvn/version.hpp"
#include "tvn/vn.hpp"

namespace {

// Exit codes: 0 ok, 1 file/validation error, 2 usage error, 3 violated
// inequality (numerical anomaly), 4 extraction precondition failure,
// 5 degeneracy during extraction.
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;
constexpr int kExitPrecondition = 4;
constexpr int kExitDegeneracy = 5;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_matricize(const std::string& input, int mode, const std::string& output) {
  const tvn::DenseTensor x = tvn::read_tensor(input);
  const tvn::Matrix m = tvn::matricize(x, mode);
  if (output.empty()) {
    const tvn::DenseTensor t = tvn::matrix_to_tensor(m);
    std::cout << "{\"shape\":[" << m.rows() << "," << m.cols() << "],\"data\":[";
    for (std::size_t i = 0; i < t.data().size(); ++i) {
      if (i) std::cout << ",";
      std::cout << fmt17(t.data()[i]);
    }
    std::cout << "]}\n";
  } else {
    tvn::write_matrix(m, output);
  }
  return 0;
}

int run_hosvd(const std::string& input, const std::string& out_dir, double rank_tol) {
  namespace fs = std::filesystem;
  const tvn::DenseTensor x = tvn::read_tensor(input);
  const tvn::HosvdFactors f = tvn::hosvd(x, rank_tol);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw tvn::IoError("cannot create directory " + out_dir + ": " + ec.message());
  tvn::write_tensor(f.core, (fs::path(out_dir) / "core.json").string());
  for (int d = 0; d < x.order(); ++d) {
    tvn::write_matrix(f.factors[d],
                      (fs::path(out_dir) / ("factor_" + std::to_string(d + 1) + ".json")).string());
  }
  tvn::write_spectra(f, rank_tol, (fs::path(out_dir) / "spectra.json").string());
  return 0;
}

int run_spectrum(const std::string& input, int mode) {
  const tvn::DenseTensor x = tvn::read_tensor(input);
  for (double s : tvn::mode_spectrum(x, mode)) std::cout << fmt17(s) << "\n";
  return 0;
}

int run_check(const std::string& x_path, const std::string& y_path, double tol,
              const std::string& report_path) {
  const tvn::DenseTensor x = tvn::read_tensor(x_path);
  const tvn::DenseTensor y = tvn::read_tensor(y_path);
  const tvn::VnReport rep = tvn::vn_check(x, y, tol);

  std::cout << "lhs = " << fmt17(rep.lhs) << "\n";
  bool violated = false;
  for (std::size_t d = 0; d < rep.gap_per_mode.size(); ++d) {
    const bool bad = rep.gap_per_mode[d] < -tol * rep.scale;
    violated = violated || bad;
    std::cout << "mode " << (d + 1) << ": rhs = " << fmt17(rep.rhs_per_mode[d])
              << "  gap = " << fmt17(rep.gap_per_mode[d])
              << "  equality = " << (rep.equality_per_mode[d] ? "yes" : "no") << "\n";
  }
  std::cout << "equality_all_modes = " << (rep.equality_all_modes ? "yes" : "no") << "\n";

  if (!report_path.empty()) {
    tvn::ReportFile rf{rep, tvn::kVersion, x_path, y_path, tvn::sha256_file_hex(x_path),
                       tvn::sha256_file_hex(y_path)};
    tvn::write_report(rf, report_path);
  }
  if (violated) {
    std::cerr << "inequality violated beyond tolerance; this signals a numerical bug\n";
    return kExitViolation;
  }
  return 0;
}

int run_witness(const std::string& spec_path, std::optional<std::uint64_t> seed_flag,
                const std::string& out_dir) {
  namespace fs = std::filesystem;
  tvn::BlockDiagonalSpec spec = tvn::read_block_spec(spec_path);
  if (seed_flag) {
    spec.seed = *seed_flag;
  } else if (const char* env = std::getenv("TVN_SEED")) {
    spec.seed = std::strtoull(env, nullptr, 10);
  }
  const tvn::ConstructedPair pair = tvn::construct_equality_pair(spec);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw tvn::IoError("cannot create directory " + out_dir + ": " + ec.message());
  tvn::write_tensor(pair.x, (fs::path(out_dir) / "x.json").string());
  tvn::write_tensor(pair.y, (fs::path(out_dir) / "y.json").string());
  tvn::write_witness(pair.witness, out_dir);
  std::cout << "wrote pair and witness to " << out_dir << " (seed " << spec.seed << ")\n";
  return 0;
}

int run_extract(const std::string& x_path, const std::string& y_path, double tol,
                const std::string& out_dir) {
  const tvn::DenseTensor x = tvn::read_tensor(x_path);
  const tvn::DenseTensor y = tvn::read_tensor(y_path);
  const tvn::EqualityWitness w = tvn::extract_equality_structure(x, y, tol);
  tvn::write_witness(w, out_dir);
  std::cout << "recovered " << w.ratios.size() << " ratio class(es):";
  for (double r : w.ratios) std::cout << " " << fmt17(r);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dense tensor HOSVD and von Neumann inequality toolkit"};
  app.set_version_flag("--version", tvn::kVersion);
  app.require_subcommand(1);

  auto* cmd_matricize = app.add_subcommand("matricize", "write the mode-d matricization");
  std::string mat_input, mat_output;
  int mat_mode = 1;
  cmd_matricize->add_option("--input", mat_input, "tensor file")->required();
  cmd_matricize->add_option("--mode", mat_mode, "mode, 1-based")->required();
  cmd_matricize->add_option("--output", mat_output, "output tensor file (stdout when absent)");

  auto* cmd_hosvd = app.add_subcommand("hosvd", "decompose into core, factors and spectra");
  std::string hosvd_input, hosvd_dir;
  double hosvd_rank_tol = tvn::kDefaultRankTol;
  cmd_hosvd->add_option("--input", hosvd_input, "tensor file")->required();
  cmd_hosvd->add_option("--output-dir", hosvd_dir, "output directory")->required();
  cmd_hosvd->add_option("--rank-tol", hosvd_rank_tol, "relative rank threshold");

  auto* cmd_spectrum = app.add_subcommand("spectrum", "print the mode-d singular values");
  std::string spec_input;
  int spec_mode = 1;
  cmd_spectrum->add_option("--input", spec_input, "tensor file")->required();
  cmd_spectrum->add_option("--mode", spec_mode, "mode, 1-based")->required();

  auto* cmd_check = app.add_subcommand("check", "check the per-mode inequality for a pair");
  std::string check_x, check_y, check_report;
  double check_tol = 1e-9;
  cmd_check->add_option("--x", check_x, "first tensor file")->required();
  cmd_check->add_option("--y", check_y, "second tensor file")->required();
  cmd_check->add_option("--tol", check_tol, "relative equality tolerance");
  cmd_check->add_option("--report", check_report, "write a JSON report here");

  auto* cmd_witness = app.add_subcommand("witness", "construct an equality pair from a block spec");
  std::string wit_spec, wit_dir;
  std::optional<std::uint64_t> wit_seed;
  cmd_witness->add_option("--spec", wit_spec, "block spec file")->required();
  cmd_witness->add_option("--seed", wit_seed, "seed override (else TVN_SEED, else the spec's)");
  cmd_witness->add_option("--output-dir", wit_dir, "output directory")->required();

  auto* cmd_extract = app.add_subcommand("extract", "recover the equality structure of a pair");
  std::string ext_x, ext_y, ext_dir;
  double ext_tol = 1e-8;
  cmd_extract->add_option("--x", ext_x, "first tensor file")->required();
  cmd_extract->add_option("--y", ext_y, "second tensor file")->required();
  cmd_extract->add_option("--tol", ext_tol, "equality tolerance")->check(CLI::PositiveNumber);
  cmd_extract->add_option("--output-dir", ext_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_matricize->parsed()) return run_matricize(mat_input, mat_mode, mat_output);
    if (cmd_hosvd->parsed()) return run_hosvd(hosvd_input, hosvd_dir, hosvd_rank_tol);
    if (cmd_spectrum->parsed()) return run_spectrum(spec_input, spec_mode);
    if (cmd_check->parsed()) return run_check(check_x, check_y, check_tol, check_report);
    if (cmd_witness->parsed()) return run_witness(wit_spec, wit_seed, wit_dir);
    if (cmd_extract->parsed()) return run_extract(ext_x, ext_y, ext_tol, ext_dir);
  } catch (const tvn::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const tvn::RankMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegeneracy;
  } catch (const tvn::DegeneracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegeneracy;
  } catch (const tvn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
