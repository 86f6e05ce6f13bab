#include "tvn/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace tvn {
namespace {

constexpr int kMaxSweeps = 30;

// Orthogonalizes candidate (length m) against the first used columns of
// basis, two passes. Returns the residual norm.
double orthogonalize(const Matrix& basis, int used, std::vector<double>& candidate) {
  const int m = static_cast<int>(candidate.size());
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < used; ++j) {
      double dot = 0.0;
      for (int k = 0; k < m; ++k) dot += basis(k, j) * candidate[k];
      for (int k = 0; k < m; ++k) candidate[k] -= dot * basis(k, j);
    }
  }
  double norm2 = 0.0;
  for (double v : candidate) norm2 += v * v;
  return std::sqrt(norm2);
}

// Fills columns [used, total) of basis with an orthonormal extension.
// Canonical basis vectors are tried in order; if the sequential scan runs
// out, the best remaining candidate is taken per slot.
void complete_basis(Matrix& basis, int used, int total) {
  const int m = basis.rows();
  std::vector<double> cand(m);
  int cursor = 0;
  while (used < total && cursor < m) {
    std::fill(cand.begin(), cand.end(), 0.0);
    cand[cursor++] = 1.0;
    const double res = orthogonalize(basis, used, cand);
    if (res >= 0.5) {
      for (int k = 0; k < m; ++k) basis(k, used) = cand[k] / res;
      ++used;
    }
  }
  while (used < total) {
    double best_res = -1.0;
    std::vector<double> best(m, 0.0);
    for (int c = 0; c < m; ++c) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[c] = 1.0;
      const double res = orthogonalize(basis, used, cand);
      if (res > best_res) {
        best_res = res;
        best = cand;
      }
    }
    for (int k = 0; k < m; ++k) basis(k, used) = best[k] / best_res;
    ++used;
  }
}

struct JacobiFactors {
  Matrix tall;   // m x m, present only when requested
  Matrix shrt;   // n x n accumulated rotations
  std::vector<double> sigma;  // length n, descending
};

// One-sided Jacobi on w (m x n, m >= n): sweeps column pairs in row-major
// order until a full sweep finds every pair orthogonal relative to its
// column norms, or kMaxSweeps elapse. The relative criterion (rather than
// a rotation-angle one) is what bounds the orthogonality of the normalized
// columns even when the spectrum is strongly graded.
JacobiFactors jacobi_tall(Matrix w, bool need_tall) {
  const int m = w.rows();
  const int n = w.cols();
  Matrix rot = Matrix::identity(n);
  const double pair_floor = 2.0 * m * std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool converged = true;
    for (int i = 0; i + 1 < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int k = 0; k < m; ++k) {
          alpha += w(k, i) * w(k, i);
          beta += w(k, j) * w(k, j);
          gamma += w(k, i) * w(k, j);
        }
        if (gamma == 0.0 || std::abs(gamma) <= pair_floor * std::sqrt(alpha) * std::sqrt(beta)) {
          continue;
        }
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < m; ++k) {
          const double wi = w(k, i), wj = w(k, j);
          w(k, i) = c * wi - s * wj;
          w(k, j) = s * wi + c * wj;
        }
        for (int k = 0; k < n; ++k) {
          const double vi = rot(k, i), vj = rot(k, j);
          rot(k, i) = c * vi - s * vj;
          rot(k, j) = s * vi + c * vj;
        }
      }
    }
    if (converged) break;
  }

  std::vector<double> sigma(n);
  for (int j = 0; j < n; ++j) {
    double norm2 = 0.0;
    for (int k = 0; k < m; ++k) norm2 += w(k, j) * w(k, j);
    sigma[j] = std::sqrt(norm2);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sigma[a] > sigma[b]; });

  JacobiFactors out;
  out.sigma.resize(n);
  out.shrt = Matrix(n, n);
  Matrix w_sorted(m, n);
  for (int j = 0; j < n; ++j) {
    out.sigma[j] = sigma[order[j]];
    for (int k = 0; k < n; ++k) out.shrt(k, j) = rot(k, order[j]);
    for (int k = 0; k < m; ++k) w_sorted(k, j) = w(k, order[j]);
  }

  if (need_tall) {
    out.tall = Matrix(m, m);
    int used = 0;
    for (int j = 0; j < n; ++j) {
      if (out.sigma[j] > 0.0) {
        for (int k = 0; k < m; ++k) out.tall(k, j) = w_sorted(k, j) / out.sigma[j];
        used = j + 1;
      } else {
        break;  // sigma is sorted; the rest are zero columns
      }
    }
    complete_basis(out.tall, used, m);
  }
  return out;
}

// First nonzero entry of each U column made positive; the paired V column
// (when the singular value is positive) flips with it, all other V columns
// get the same rule independently.
void apply_sign_convention(Matrix& u, std::vector<double>& sigma, Matrix& v) {
  const int nsig = static_cast<int>(sigma.size());
  auto flip_col = [](Matrix& m, int j) {
    for (int k = 0; k < m.rows(); ++k) m(k, j) = -m(k, j);
  };
  auto first_nonzero_negative = [](const Matrix& m, int j) {
    for (int k = 0; k < m.rows(); ++k) {
      if (m(k, j) != 0.0) return m(k, j) < 0.0;
    }
    return false;
  };
  for (int j = 0; j < u.cols(); ++j) {
    if (first_nonzero_negative(u, j)) {
      flip_col(u, j);
      if (j < nsig && sigma[j] > 0.0) flip_col(v, j);
    }
  }
  for (int j = 0; j < v.cols(); ++j) {
    if ((j >= nsig || sigma[j] == 0.0) && first_nonzero_negative(v, j)) flip_col(v, j);
  }
}

}  // namespace

SvdResult matrix_svd(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) throw ValidationError("matrix_svd: empty matrix");
  SvdResult r;
  if (a.rows() >= a.cols()) {
    JacobiFactors f = jacobi_tall(a, /*need_tall=*/true);
    r.u = std::move(f.tall);
    r.v = std::move(f.shrt);
    r.sigma = std::move(f.sigma);
  } else {
    JacobiFactors f = jacobi_tall(transposed(a), /*need_tall=*/true);
    r.u = std::move(f.shrt);
    r.v = std::move(f.tall);
    r.sigma = std::move(f.sigma);
  }
  apply_sign_convention(r.u, r.sigma, r.v);
  return r;
}

std::pair<Matrix, std::vector<double>> svd_left_spectrum(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) throw ValidationError("svd_left_spectrum: empty matrix");
  Matrix u;
  std::vector<double> sigma;
  if (a.rows() >= a.cols()) {
    JacobiFactors f = jacobi_tall(a, /*need_tall=*/true);
    u = std::move(f.tall);
    sigma = std::move(f.sigma);
    Matrix v = std::move(f.shrt);
    apply_sign_convention(u, sigma, v);
  } else {
    JacobiFactors f = jacobi_tall(transposed(a), /*need_tall=*/false);
    u = std::move(f.shrt);
    sigma = std::move(f.sigma);
    // The tall side is not materialized; sign flips on U alone do not
    // depend on it.
    Matrix v_dummy = Matrix::identity(u.cols());
    apply_sign_convention(u, sigma, v_dummy);
  }
  return {std::move(u), std::move(sigma)};
}

Matrix random_orthogonal(int n, Rng& rng) {
  if (n < 1) throw ValidationError("random_orthogonal: size must be positive");
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian();

  Matrix q(n, n);
  std::vector<double> cand(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) cand[k] = g(k, j);
    const double res = orthogonalize(q, j, cand);
    if (res < 1e-12) {
      // Degenerate draw; fall back to extending with canonical vectors.
      complete_basis(q, j, j + 1);
    } else {
      for (int k = 0; k < n; ++k) q(k, j) = cand[k] / res;
    }
    // R(j,j) = <q_j, g_j> made positive for a canonical representative.
    double diag = 0.0;
    for (int k = 0; k < n; ++k) diag += q(k, j) * g(k, j);
    if (diag < 0.0) {
      for (int k = 0; k < n; ++k) q(k, j) = -q(k, j);
    }
  }
  return q;
}

}  // namespace tvn
