#pragma once

#include <string>

#include "tvn/hosvd.hpp"
#include "tvn/tensor.hpp"
#include "tvn/vn.hpp"

namespace tvn {

// Tensor files are JSON objects {"shape":[...],"data":[...]} with the data
// in last-index-fastest order. Doubles are written with shortest
// round-trip formatting, so one write/read cycle is value-exact and
// repeated writes are byte-identical.

DenseTensor read_tensor(const std::string& path);
void write_tensor(const DenseTensor& x, const std::string& path);

/// Matrices travel as 2-mode tensor files.
Matrix read_matrix(const std::string& path);
void write_matrix(const Matrix& m, const std::string& path);

BlockDiagonalSpec read_block_spec(const std::string& path);
void write_block_spec(const BlockDiagonalSpec& spec, const std::string& path);

/// Check report on disk: the VnReport plus tool version and SHA-256
/// digests of the two input files. Floating-point fields are written with
/// 17 significant digits.
struct ReportFile {
  VnReport report;
  std::string version;
  std::string x_path;
  std::string y_path;
  std::string x_sha256;
  std::string y_sha256;
};

void write_report(const ReportFile& r, const std::string& path);
ReportFile read_report(const std::string& path);

/// Witness directory layout: witness.json (ratios, block shapes, optional
/// seed and permutations) next to dx.json, dy.json and factor_<d>.json.
void write_witness(const EqualityWitness& w, const std::string& dir);
EqualityWitness read_witness(const std::string& dir);

void write_spectra(const HosvdFactors& f, double rank_tol, const std::string& path);

std::string sha256_file_hex(const std::string& path);

}  // namespace tvn
