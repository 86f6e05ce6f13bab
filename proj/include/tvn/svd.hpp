#pragma once

#include <vector>

#include "tvn/rng.hpp"
#include "tvn/tensor.hpp"

namespace tvn {

/// Full SVD A = U * Diag(sigma) * V^t with square orthogonal U (m x m) and
/// V (n x n); sigma has min(m, n) entries sorted descending.
struct SvdResult {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;
};

/// One-sided Jacobi SVD on the taller orientation of A.
///
/// Deterministic for a fixed input: column pairs are swept in row-major
/// order until a sweep finds every pair orthogonal relative to its column
/// norms, or 30 sweeps elapse. Sign convention: the first nonzero entry of
/// each column of U is positive, V adjusted to match. Columns belonging to
/// zero singular values are completed by Gram-Schmidt basis extension.
SvdResult matrix_svd(const Matrix& a);

/// U and sigma of matrix_svd(a), skipping the other factor's basis
/// completion. Bit-identical to the corresponding matrix_svd fields.
std::pair<Matrix, std::vector<double>> svd_left_spectrum(const Matrix& a);

/// Haar-like random orthogonal matrix: seeded Gaussian entries followed by
/// Gram-Schmidt with re-orthogonalization and the R diagonal made positive.
Matrix random_orthogonal(int n, Rng& rng);

}  // namespace tvn
