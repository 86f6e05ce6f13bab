#pragma once

#include <vector>

#include "tvn/tensor.hpp"

// Serial reference kernels. These walk explicit multi-indices and evaluate
// the defining sums directly, with no stride precomputation and no OpenMP,
// so they stay independent of the production kernels they are checked
// against. Linked only into the tests and the benchmark.
namespace tvn::ref {

Matrix matricize(const DenseTensor& x, int mode);
DenseTensor dematricize(const Matrix& m, int mode, const std::vector<int>& shape);
DenseTensor mode_multiply(const DenseTensor& x, int mode, const Matrix& u);
double inner_product(const DenseTensor& x, const DenseTensor& y);
Matrix kronecker(const Matrix& a, const Matrix& b);

}  // namespace tvn::ref
