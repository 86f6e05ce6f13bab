#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tvn/rng.hpp"
#include "tvn/tensor.hpp"

namespace tvn::testing {

inline DenseTensor random_tensor(std::vector<int> shape, std::uint64_t seed) {
  std::size_t n = 1;
  for (int e : shape) n *= static_cast<std::size_t>(e);
  Rng rng(seed);
  std::vector<double> data(n);
  for (double& v : data) v = rng.gaussian();
  return DenseTensor(std::move(shape), std::move(data));
}

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> data(static_cast<std::size_t>(rows) * cols);
  for (double& v : data) v = rng.gaussian();
  return Matrix(rows, cols, std::move(data));
}

/// Tensor with entries 1..N in storage order.
inline DenseTensor iota_tensor(std::vector<int> shape) {
  std::size_t n = 1;
  for (int e : shape) n *= static_cast<std::size_t>(e);
  std::vector<double> data(n);
  std::iota(data.begin(), data.end(), 1.0);
  return DenseTensor(std::move(shape), std::move(data));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  return max_abs_diff(a.data(), b.data());
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return max_abs_diff(a.entries(), b.entries());
}

inline double fro_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

/// |a - b|_F relative to |b|_F (absolute when b is zero).
inline double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] - b[i]) * (a[i] - b[i]);
  const double scale = fro_norm(b);
  return scale > 0.0 ? std::sqrt(diff) / scale : std::sqrt(diff);
}

inline double rel_err(const DenseTensor& a, const DenseTensor& b) {
  return rel_err(a.data(), b.data());
}

inline double rel_err(const Matrix& a, const Matrix& b) {
  return rel_err(a.entries(), b.entries());
}

inline double orthogonality_defect(const Matrix& q) {
  double worst = 0.0;
  for (int i = 0; i < q.cols(); ++i) {
    for (int j = 0; j < q.cols(); ++j) {
      double dot = 0.0;
      for (int k = 0; k < q.rows(); ++k) dot += q(k, i) * q(k, j);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace tvn::testing
