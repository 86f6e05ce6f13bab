#include "tvn/hosvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvn {
namespace {

// Zero-pads or truncates a spectrum to length n_d; matricizations with
// fewer columns than rows yield fewer singular values than the mode extent.
std::vector<double> pad_spectrum(std::vector<double> sigma, int nd) {
  sigma.resize(static_cast<std::size_t>(nd), 0.0);
  return sigma;
}

}  // namespace

HosvdFactors hosvd(const DenseTensor& x, double rank_tol) {
  const int order = x.order();
  std::vector<Matrix> factors(order);
  std::vector<std::vector<double>> spectra(order);

  // Per-mode SVDs are independent of each other.
#pragma omp parallel for schedule(dynamic) if (x.size() >= 4096)
  for (int d = 0; d < order; ++d) {
    auto [u, sigma] = svd_left_spectrum(matricize(x, d + 1));
    factors[d] = std::move(u);
    spectra[d] = pad_spectrum(std::move(sigma), x.shape()[d]);
  }

  DenseTensor core = x;
  for (int d = 0; d < order; ++d) {
    core = mode_multiply(core, d + 1, transposed(factors[d]));
  }

  HosvdFactors f{std::move(core), std::move(factors), std::move(spectra), {}};
  f.ranks = mode_ranks(f, rank_tol);
  return f;
}

std::vector<double> mode_spectrum(const DenseTensor& x, int mode) {
  if (mode < 1 || mode > x.order()) {
    throw IndexError("mode_spectrum: mode " + std::to_string(mode) + " out of range");
  }
  auto [u, sigma] = svd_left_spectrum(matricize(x, mode));
  (void)u;
  return pad_spectrum(std::move(sigma), x.shape()[mode - 1]);
}

std::vector<double> sigma_map(const DenseTensor& x) {
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(x.order()));
  std::vector<double> out;
  for (int d = 1; d <= x.order(); ++d) {
    for (double s : mode_spectrum(x, d)) out.push_back(inv_sqrt_d * s);
  }
  return out;
}

DenseTensor reconstruct(const HosvdFactors& f) {
  if (static_cast<int>(f.factors.size()) != f.core.order()) {
    throw ShapeError("reconstruct: factor count does not match core order");
  }
  DenseTensor x = f.core;
  for (int d = 0; d < f.core.order(); ++d) {
    if (f.factors[d].cols() != f.core.shape()[d]) {
      throw ShapeError("reconstruct: factor " + std::to_string(d + 1) +
                       " does not match the core extent");
    }
    x = mode_multiply(x, d + 1, f.factors[d]);
  }
  return x;
}

double core_orthogonality_defect(const DenseTensor& s) {
  const double norm2 = inner_product(s, s);
  const double scale = std::max(norm2, std::numeric_limits<double>::epsilon());
  double worst = 0.0;
  for (int d = 1; d <= s.order(); ++d) {
    const Matrix m = matricize(s, d);
    for (int k = 0; k < m.rows(); ++k) {
      for (int k2 = k + 1; k2 < m.rows(); ++k2) {
        double dot = 0.0;
        for (int c = 0; c < m.cols(); ++c) dot += m(k, c) * m(k2, c);
        worst = std::max(worst, std::abs(dot));
      }
    }
  }
  return worst / scale;
}

std::vector<int> mode_ranks(const HosvdFactors& f, double rank_tol) {
  if (rank_tol < 0.0) throw ValidationError("mode_ranks: rank_tol must be nonnegative");
  std::vector<int> ranks;
  ranks.reserve(f.spectra.size());
  for (const auto& sigma : f.spectra) {
    int r = 0;
    if (!sigma.empty() && sigma[0] > 0.0) {
      const double cut = rank_tol * sigma[0];
      for (double s : sigma) {
        if (s > cut) ++r;
      }
    }
    ranks.push_back(r);
  }
  return ranks;
}

}  // namespace tvn
