#include "tvn/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace tvn {
namespace {

// Element counts below this stay serial; above it the loops go parallel.
constexpr std::int64_t kOmpGrain = 1 << 15;

std::size_t checked_product(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int e : shape) n *= static_cast<std::size_t>(e);
  return n;
}

// Flat strides for last-index-fastest storage (0-based modes).
std::vector<std::size_t> strides_of(const std::vector<int>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (int d = static_cast<int>(shape.size()) - 2; d >= 0; --d) {
    s[d] = s[d + 1] * static_cast<std::size_t>(shape[d + 1]);
  }
  return s;
}

void check_mode(const std::vector<int>& shape, int mode) {
  if (mode < 1 || mode > static_cast<int>(shape.size())) {
    throw IndexError("mode " + std::to_string(mode) + " out of range for a " +
                     std::to_string(shape.size()) + "-mode tensor");
  }
}

// Source offsets of the matricization columns: column c of matricize(x, d)
// reads data[k * stride_d + base[c]] for row k. Columns enumerate the
// remaining modes in cyclic order (d+1, ..., D, 1, ..., d-1), first slowest.
std::vector<std::size_t> column_bases(const std::vector<int>& shape, int mode0) {
  const int order = static_cast<int>(shape.size());
  const auto strides = strides_of(shape);
  std::vector<int> cyc;
  cyc.reserve(order - 1);
  for (int i = 1; i < order; ++i) cyc.push_back((mode0 + i) % order);

  std::size_t ncols = 1;
  for (int e : cyc) ncols *= static_cast<std::size_t>(shape[e]);

  std::vector<std::size_t> base(ncols, 0);
  if (ncols == 1) return base;
  // Odometer over the cyclic modes, last one fastest.
  std::vector<int> idx(cyc.size(), 0);
  for (std::size_t c = 0;; ++c) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < cyc.size(); ++j) off += static_cast<std::size_t>(idx[j]) * strides[cyc[j]];
    base[c] = off;
    int j = static_cast<int>(cyc.size()) - 1;
    while (j >= 0 && ++idx[j] == shape[cyc[j]]) idx[j--] = 0;
    if (j < 0) break;
  }
  return base;
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ValidationError("matrix dimensions must be nonnegative");
  entries_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 1 || cols < 1) throw ValidationError("matrix dimensions must be positive");
  const std::size_t expected = static_cast<std::size_t>(rows) * cols;
  if (entries_.size() != expected) {
    throw ValidationError("matrix entry length mismatch: expected " + std::to_string(expected) +
                          ", got " + std::to_string(entries_.size()));
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i])) {
      throw ValidationError("non-finite matrix entry at flat position " + std::to_string(i));
    }
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions disagree (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transposed(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  const int rows = a.rows() * b.rows();
  const int cols = a.cols() * b.cols();
  Matrix k(rows, cols);
  double* out = k.entries().data();
#pragma omp parallel for collapse(2) schedule(static) \
    if (static_cast<std::int64_t>(rows) * cols >= kOmpGrain)
  for (int ar = 0; ar < a.rows(); ++ar) {
    for (int br = 0; br < b.rows(); ++br) {
      double* row = out + (static_cast<std::size_t>(ar) * b.rows() + br) * cols;
      for (int ac = 0; ac < a.cols(); ++ac) {
        const double scale = a(ar, ac);
        double* block = row + static_cast<std::size_t>(ac) * b.cols();
        for (int bc = 0; bc < b.cols(); ++bc) block[bc] = scale * b(br, bc);
      }
    }
  }
  return k;
}

bool MultiIndex::leq(const MultiIndex& a, const MultiIndex& b) {
  if (a.indices.size() != b.indices.size()) {
    throw ShapeError("multi-index order mismatch");
  }
  for (std::size_t i = 0; i < a.indices.size(); ++i) {
    if (a.indices[i] > b.indices[i]) return false;
  }
  return true;
}

DenseTensor::DenseTensor(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty()) throw ValidationError("tensor must have at least one mode");
  for (int e : shape_) {
    if (e < 1) throw ValidationError("tensor extents must be positive");
  }
  const std::size_t expected = checked_product(shape_);
  if (data_.size() != expected) {
    throw ValidationError("tensor data length mismatch: expected " + std::to_string(expected) +
                          ", got " + std::to_string(data_.size()));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ValidationError("non-finite tensor entry at flat position " + std::to_string(i));
    }
  }
}

DenseTensor DenseTensor::zeros(std::vector<int> shape) {
  std::size_t n = 1;
  for (int e : shape) n *= static_cast<std::size_t>(e > 0 ? e : 0);
  return DenseTensor(std::move(shape), std::vector<double>(n, 0.0));
}

int DenseTensor::dim(int d) const {
  check_mode(shape_, d);
  return shape_[d - 1];
}

double DenseTensor::at(const std::vector<int>& index) const {
  if (static_cast<int>(index.size()) != order()) {
    throw IndexError("multi-index has " + std::to_string(index.size()) + " entries for a " +
                     std::to_string(order()) + "-mode tensor");
  }
  const auto strides = strides_of(shape_);
  std::size_t off = 0;
  for (int d = 0; d < order(); ++d) {
    if (index[d] < 1 || index[d] > shape_[d]) {
      throw IndexError("index " + std::to_string(index[d]) + " out of range [1," +
                       std::to_string(shape_[d]) + "] in mode " + std::to_string(d + 1));
    }
    off += static_cast<std::size_t>(index[d] - 1) * strides[d];
  }
  return data_[off];
}

DenseTensor subtensor_fix(const DenseTensor& x, int mode, int k) {
  check_mode(x.shape(), mode);
  const int d0 = mode - 1;
  const int nd = x.shape()[d0];
  if (k < 1 || k > nd) {
    throw IndexError("slice index " + std::to_string(k) + " out of range [1," + std::to_string(nd) +
                     "] in mode " + std::to_string(mode));
  }
  if (x.order() == 1) {
    return DenseTensor({1}, {x.flat(static_cast<std::size_t>(k - 1))});
  }
  std::vector<int> out_shape;
  out_shape.reserve(x.order() - 1);
  std::size_t outer = 1, inner = 1;
  for (int d = 0; d < x.order(); ++d) {
    if (d == d0) continue;
    out_shape.push_back(x.shape()[d]);
    if (d < d0) outer *= static_cast<std::size_t>(x.shape()[d]);
    else inner *= static_cast<std::size_t>(x.shape()[d]);
  }
  std::vector<double> out(outer * inner);
  const double* src = x.data().data();
  for (std::size_t a = 0; a < outer; ++a) {
    const std::size_t src_base = (a * static_cast<std::size_t>(nd) + static_cast<std::size_t>(k - 1)) * inner;
    for (std::size_t b = 0; b < inner; ++b) out[a * inner + b] = src[src_base + b];
  }
  return DenseTensor(std::move(out_shape), std::move(out));
}

std::vector<std::vector<double>> mode_fibers(const DenseTensor& x, int mode) {
  check_mode(x.shape(), mode);
  const int d0 = mode - 1;
  const int nd = x.shape()[d0];
  const auto strides = strides_of(x.shape());
  const auto base = column_bases(x.shape(), d0);
  std::vector<std::vector<double>> fibers(base.size());
  for (std::size_t c = 0; c < base.size(); ++c) {
    std::vector<double> f(nd);
    for (int k = 0; k < nd; ++k) f[k] = x.flat(base[c] + static_cast<std::size_t>(k) * strides[d0]);
    fibers[c] = std::move(f);
  }
  return fibers;
}

Matrix matricize(const DenseTensor& x, int mode) {
  check_mode(x.shape(), mode);
  const int d0 = mode - 1;
  const int nd = x.shape()[d0];
  const auto strides = strides_of(x.shape());
  const auto base = column_bases(x.shape(), d0);
  const std::int64_t ncols = static_cast<std::int64_t>(base.size());
  Matrix m(nd, static_cast<int>(ncols));
  double* out = m.entries().data();
  const double* src = x.data().data();
  const std::size_t sd = strides[d0];
#pragma omp parallel for schedule(static) if (static_cast<std::int64_t>(x.size()) >= kOmpGrain)
  for (std::int64_t k = 0; k < nd; ++k) {
    double* row = out + k * ncols;
    const double* slice = src + static_cast<std::size_t>(k) * sd;
    for (std::int64_t c = 0; c < ncols; ++c) row[c] = slice[base[c]];
  }
  return m;
}

DenseTensor dematricize(const Matrix& m, int mode, const std::vector<int>& shape) {
  check_mode(shape, mode);
  const int d0 = mode - 1;
  const std::size_t total = checked_product(shape);
  const std::size_t expect_cols = total / static_cast<std::size_t>(shape[d0]);
  if (m.rows() != shape[d0] || static_cast<std::size_t>(m.cols()) != expect_cols) {
    throw ShapeError("dematricize: matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + " but mode " + std::to_string(mode) +
                     " of the target shape needs " + std::to_string(shape[d0]) + "x" +
                     std::to_string(expect_cols));
  }
  const auto strides = strides_of(shape);
  const auto base = column_bases(shape, d0);
  const std::int64_t nd = shape[d0];
  const std::int64_t ncols = static_cast<std::int64_t>(base.size());
  std::vector<double> out(total);
  double* dst = out.data();
  const double* src = m.entries().data();
  const std::size_t sd = strides[d0];
#pragma omp parallel for schedule(static) if (static_cast<std::int64_t>(total) >= kOmpGrain)
  for (std::int64_t k = 0; k < nd; ++k) {
    const double* row = src + k * ncols;
    double* slice = dst + static_cast<std::size_t>(k) * sd;
    for (std::int64_t c = 0; c < ncols; ++c) slice[base[c]] = row[c];
  }
  return DenseTensor(shape, std::move(out));
}

DenseTensor mode_multiply(const DenseTensor& x, int mode, const Matrix& u) {
  check_mode(x.shape(), mode);
  const int d0 = mode - 1;
  const int nd = x.shape()[d0];
  if (u.cols() != nd) {
    throw ShapeError("mode_multiply: matrix has " + std::to_string(u.cols()) +
                     " columns but mode " + std::to_string(mode) + " has extent " +
                     std::to_string(nd));
  }
  const int p = u.rows();
  std::size_t outer = 1, inner = 1;
  for (int d = 0; d < d0; ++d) outer *= static_cast<std::size_t>(x.shape()[d]);
  for (int d = d0 + 1; d < x.order(); ++d) inner *= static_cast<std::size_t>(x.shape()[d]);

  std::vector<int> out_shape = x.shape();
  out_shape[d0] = p;
  std::vector<double> out(outer * static_cast<std::size_t>(p) * inner, 0.0);
  const double* src = x.data().data();
  const std::int64_t slabs = static_cast<std::int64_t>(outer) * p;
#pragma omp parallel for schedule(static) \
    if (slabs * static_cast<std::int64_t>(inner) * nd >= kOmpGrain)
  for (std::int64_t s = 0; s < slabs; ++s) {
    const std::size_t a = static_cast<std::size_t>(s) / p;
    const int r = static_cast<int>(s % p);
    double* dst = out.data() + static_cast<std::size_t>(s) * inner;
    for (int k = 0; k < nd; ++k) {
      const double c = u(r, k);
      if (c == 0.0) continue;
      const double* slice = src + (a * static_cast<std::size_t>(nd) + k) * inner;
      for (std::size_t b = 0; b < inner; ++b) dst[b] += c * slice[b];
    }
  }
  return DenseTensor(std::move(out_shape), std::move(out));
}

double inner_product(const DenseTensor& x, const DenseTensor& y) {
  if (x.shape() != y.shape()) {
    throw ShapeError("inner_product: tensor shapes disagree");
  }
  // Fixed-width blocked sum: partials are accumulated per 4096-element
  // block and combined in block order, so the result does not depend on
  // the number of threads.
  constexpr std::size_t kBlock = 4096;
  const std::size_t n = x.size();
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  const double* xs = x.data().data();
  const double* ys = y.data().data();
  if (nblocks <= 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += xs[i] * ys[i];
    return acc;
  }
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (static_cast<std::int64_t>(n) >= kOmpGrain)
  for (std::int64_t blk = 0; blk < static_cast<std::int64_t>(nblocks); ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += xs[i] * ys[i];
    partial[blk] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

double frobenius_norm(const DenseTensor& x) { return std::sqrt(inner_product(x, x)); }

Matrix tensor_to_matrix(const DenseTensor& x) {
  if (x.order() != 2) {
    throw ShapeError("tensor_to_matrix: tensor has " + std::to_string(x.order()) + " modes");
  }
  return Matrix(x.shape()[0], x.shape()[1], x.data());
}

DenseTensor matrix_to_tensor(const Matrix& m) {
  return DenseTensor({m.rows(), m.cols()}, m.entries());
}

}  // namespace tvn
