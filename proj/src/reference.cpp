#include "tvn/reference.hpp"

#include <string>

namespace tvn::ref {
namespace {

// Advances a 1-based multi-index odometer-style, last mode fastest.
// Returns false once the index wraps past the end.
bool advance(std::vector<int>& idx, const std::vector<int>& shape) {
  int d = static_cast<int>(shape.size()) - 1;
  while (d >= 0) {
    if (++idx[d] <= shape[d]) return true;
    idx[d--] = 1;
  }
  return false;
}

// Column number of a multi-index in the cyclic order (d+1,...,D,1,...,d-1),
// first listed slowest: fold the digits left to right.
std::size_t column_of(const std::vector<int>& idx, const std::vector<int>& shape, int mode) {
  const int order = static_cast<int>(shape.size());
  std::size_t col = 0;
  for (int i = 1; i < order; ++i) {
    const int e = (mode - 1 + i) % order;
    col = col * static_cast<std::size_t>(shape[e]) + static_cast<std::size_t>(idx[e] - 1);
  }
  return col;
}

std::size_t product(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int e : shape) n *= static_cast<std::size_t>(e);
  return n;
}

}  // namespace

Matrix matricize(const DenseTensor& x, int mode) {
  if (mode < 1 || mode > x.order()) throw IndexError("ref::matricize: mode out of range");
  std::size_t ncols = x.size() / static_cast<std::size_t>(x.shape()[mode - 1]);
  Matrix m(x.shape()[mode - 1], static_cast<int>(ncols));
  std::vector<int> idx(x.order(), 1);
  do {
    m(idx[mode - 1] - 1, static_cast<int>(column_of(idx, x.shape(), mode))) = x.at(idx);
  } while (advance(idx, x.shape()));
  return m;
}

DenseTensor dematricize(const Matrix& m, int mode, const std::vector<int>& shape) {
  const std::size_t total = product(shape);
  std::size_t ncols = total / static_cast<std::size_t>(shape[mode - 1]);
  if (m.rows() != shape[mode - 1] || static_cast<std::size_t>(m.cols()) != ncols) {
    throw ShapeError("ref::dematricize: matrix does not match the target shape");
  }
  std::vector<double> out(total);
  std::vector<int> idx(shape.size(), 1);
  std::size_t flat = 0;
  do {
    out[flat++] = m(idx[mode - 1] - 1, static_cast<int>(column_of(idx, shape, mode)));
  } while (advance(idx, shape));
  return DenseTensor(shape, std::move(out));
}

DenseTensor mode_multiply(const DenseTensor& x, int mode, const Matrix& u) {
  if (mode < 1 || mode > x.order()) throw IndexError("ref::mode_multiply: mode out of range");
  if (u.cols() != x.shape()[mode - 1]) throw ShapeError("ref::mode_multiply: column count mismatch");
  std::vector<int> out_shape = x.shape();
  out_shape[mode - 1] = u.rows();
  std::vector<double> out;
  out.reserve(product(out_shape));
  std::vector<int> idx(out_shape.size(), 1);
  do {
    // Defining sum: contract mode d of x against row idx[d] of u.
    double acc = 0.0;
    std::vector<int> src = idx;
    for (int k = 1; k <= x.shape()[mode - 1]; ++k) {
      src[mode - 1] = k;
      acc += x.at(src) * u(idx[mode - 1] - 1, k - 1);
    }
    out.push_back(acc);
  } while (advance(idx, out_shape));
  return DenseTensor(out_shape, std::move(out));
}

double inner_product(const DenseTensor& x, const DenseTensor& y) {
  if (x.shape() != y.shape()) throw ShapeError("ref::inner_product: shapes disagree");
  double acc = 0.0;
  std::vector<int> idx(x.order(), 1);
  do {
    acc += x.at(idx) * y.at(idx);
  } while (advance(idx, x.shape()));
  return acc;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

}  // namespace tvn::ref
