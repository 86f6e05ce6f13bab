#pragma once

#include <vector>

#include "tvn/svd.hpp"
#include "tvn/tensor.hpp"

namespace tvn {

/// Ranks count spectrum entries above rank_tol relative to the leading one.
inline constexpr double kDefaultRankTol = 1e-10;

/// Higher-order SVD of a tensor: orthogonal factor per mode, per-mode
/// singular spectra (each padded with zeros to length n_d), multilinear
/// ranks, and the all-orthogonal core, which has the same shape as the
/// input and satisfies input = core x_1 factors[0] ... x_D factors[D-1].
struct HosvdFactors {
  DenseTensor core;
  std::vector<Matrix> factors;
  std::vector<std::vector<double>> spectra;
  std::vector<int> ranks;
};

HosvdFactors hosvd(const DenseTensor& x, double rank_tol = kDefaultRankTol);

/// Singular values of matricize(x, mode), descending, zero-padded to n_d.
std::vector<double> mode_spectrum(const DenseTensor& x, int mode);

/// 1/sqrt(D) times the concatenation of all mode spectra, in mode order.
/// Its 2-norm equals the Frobenius norm of x.
std::vector<double> sigma_map(const DenseTensor& x);

/// core x_1 U^(1) ... x_D U^(D).
DenseTensor reconstruct(const HosvdFactors& f);

/// max over modes d and slice pairs k != k' of |<S_{i_d=k}, S_{i_d=k'}>|,
/// normalized by max(|S|_F^2, eps). Zero for a true HOSVD core.
double core_orthogonality_defect(const DenseTensor& s);

std::vector<int> mode_ranks(const HosvdFactors& f, double rank_tol);

}  // namespace tvn
