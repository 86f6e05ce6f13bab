#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tvn/errors.hpp"

namespace tvn {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, std::vector<double> entries);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int r, int c) const { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
  double& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }

  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& entries() { return entries_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> entries_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transposed(const Matrix& a);

/// Standard Kronecker product: entry ((a*rows(B)+b), (c*cols(B)+d)) of the
/// result is A(a,c)*B(b,d); the left factor's index varies slowest.
Matrix kronecker(const Matrix& a, const Matrix& b);

/// 1-based multi-index (i_1,...,i_D) with the componentwise partial order.
struct MultiIndex {
  std::vector<int> indices;

  static bool leq(const MultiIndex& a, const MultiIndex& b);
  static bool geq(const MultiIndex& a, const MultiIndex& b) { return leq(b, a); }
};

/// Dense D-dimensional real tensor. The flat buffer stores the last index
/// fastest, so a D=2 tensor and a row-major Matrix share the same layout.
/// Immutable after construction; every operation returns a fresh tensor.
class DenseTensor {
 public:
  /// Validates shape positivity, the length product, and finiteness of
  /// every entry.
  DenseTensor(std::vector<int> shape, std::vector<double> data);

  static DenseTensor zeros(std::vector<int> shape);

  int order() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  /// Extent of mode d, 1-based.
  int dim(int d) const;
  std::size_t size() const { return data_.size(); }
  const std::vector<double>& data() const { return data_; }

  double flat(std::size_t offset) const { return data_[offset]; }
  /// Element access with 1-based indices.
  double at(const std::vector<int>& index) const;
  double at(const MultiIndex& index) const { return at(index.indices); }

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

/// The (D-1)-dimensional slice with mode-d index fixed to k (both 1-based).
/// For D=1 the result has shape [1].
DenseTensor subtensor_fix(const DenseTensor& x, int mode, int k);

/// All mode-d fibers, in the column order of matricize(x, mode).
std::vector<std::vector<double>> mode_fibers(const DenseTensor& x, int mode);

/// Mode-d matricization: an n_d x (prod of the other extents) matrix whose
/// row k is the flattened slice x_{i_d=k}. Columns enumerate the remaining
/// modes in cyclic order (d+1, ..., D, 1, ..., d-1), first listed slowest.
/// This matches Kronecker-factor indexing of the same cyclic order and
/// differs from the reversed ordering common elsewhere; see README.
Matrix matricize(const DenseTensor& x, int mode);

/// Inverse of matricize for the given mode and shape.
DenseTensor dematricize(const Matrix& m, int mode, const std::vector<int>& shape);

/// Mode-d product x ×_d u: contracts mode d against the columns of u, so
/// matricize(mode_multiply(x, d, u), d) == u * matricize(x, d).
DenseTensor mode_multiply(const DenseTensor& x, int mode, const Matrix& u);

double inner_product(const DenseTensor& x, const DenseTensor& y);
double frobenius_norm(const DenseTensor& x);

Matrix tensor_to_matrix(const DenseTensor& x);
DenseTensor matrix_to_tensor(const Matrix& m);

}  // namespace tvn
