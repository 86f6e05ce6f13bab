#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tvn/hosvd.hpp"
#include "tvn/tensor.hpp"

namespace tvn {

/// Result of checking <X,Y> <= <sigma_d(X), sigma_d(Y)> on every mode.
/// Equality flags compare |gap| against tol * scale with
/// scale = |X|_F * |Y|_F (1 when either tensor is zero), so they are
/// invariant under rescaling of the inputs.
struct VnReport {
  double lhs = 0.0;
  std::vector<double> rhs_per_mode;
  std::vector<double> gap_per_mode;  // rhs - lhs
  std::vector<bool> equality_per_mode;
  bool equality_all_modes = false;
  double tol = 0.0;
  double scale = 1.0;
};

VnReport vn_check(const DenseTensor& x, const DenseTensor& y, double tol);

/// Layout for a block-wise diagonal tensor pair: L diagonal blocks with
/// per-mode extents m_{d,l} placed at cumulative offsets inside the ambient
/// shape, plus the strictly decreasing positive ratio each X block bears to
/// the corresponding Y block.
struct BlockDiagonalSpec {
  std::vector<int> ambient_shape;
  std::vector<std::vector<int>> block_shapes;  // one shape tuple per block
  std::vector<double> ratios;                  // rho_1 > ... > rho_L > 0
  std::uint64_t seed = 0;

  int num_modes() const { return static_cast<int>(ambient_shape.size()); }
  int num_blocks() const { return static_cast<int>(block_shapes.size()); }
  void validate() const;  // throws ValidationError
};

/// Places block l at mode-d index range (sum_{j<l} m_{d,j}, sum_{j<=l} m_{d,j}],
/// zero elsewhere.
DenseTensor build_block_diagonal(const BlockDiagonalSpec& spec,
                                 const std::vector<DenseTensor>& blocks);

/// Certificate for an equality pair: X = DX x_1 W^(1) ... x_D W^(D) and
/// likewise for Y, where DX and DY are block-wise diagonal with identical
/// layout and block l of DX equals ratios[l] times block l of DY.
struct EqualityWitness {
  std::vector<Matrix> factors_w;
  DenseTensor dx;
  DenseTensor dy;
  std::vector<std::vector<int>> block_shapes;
  std::vector<double> ratios;
  /// Per-mode index maps (1-based images), present when produced by
  /// extraction; empty for constructed pairs.
  std::vector<std::vector<int>> permutations;
  std::optional<std::uint64_t> seed;
};

struct ConstructedPair {
  DenseTensor x;
  DenseTensor y;
  EqualityWitness witness;
};

/// Draws seeded Gaussian blocks for DY, rescales them so every mode-d
/// spectrum of block l sits strictly above that of block l+1 (factor 1.25),
/// sets DX blocks to ratios[l] times the DY blocks, and rotates both by
/// seeded random orthogonal factors. The returned pair satisfies
/// vn_check(x, y, 1e-8).equality_all_modes.
ConstructedPair construct_equality_pair(const BlockDiagonalSpec& spec);

/// Grouping of spectrum indices by the common value of
/// sigma_d_k(X) / sigma_d_k(Y).
struct RatioClasses {
  std::vector<double> ratios;  // descending, one per class
  /// index_sets[d][l]: 1-based spectrum indices of mode d+1 in class l.
  std::vector<std::vector<std::vector<int>>> index_sets;

  int num_classes() const { return static_cast<int>(ratios.size()); }
  int count(int d, int l) const { return static_cast<int>(index_sets[d][l].size()); }
};

/// Clusters the per-index ratios of the two spectra (over k up to X's mode
/// rank) into classes whose members differ from the class representative by
/// at most group_tol relative. Throws RankMismatchError when X has positive
/// spectrum mass at an index where Y's is zero.
RatioClasses ratio_classes(const HosvdFactors& fx, const HosvdFactors& fy,
                           double group_tol);

/// Recovers the equality structure of a pair for which vn_check reports
/// equality on all modes: shared orthogonal factors, mode permutations that
/// sort spectrum indices into class-contiguous order, and the block-wise
/// diagonal proportional cores. Throws PreconditionError when equality does
/// not hold at tol, RankMismatchError / DegeneracyError when the structure
/// cannot be certified (tied spectra, core rows not proportional, mass
/// outside the blocks).
EqualityWitness extract_equality_structure(const DenseTensor& x,
                                           const DenseTensor& y, double tol);

}  // namespace tvn
