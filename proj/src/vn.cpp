#include "tvn/vn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "tvn/rng.hpp"
#include "tvn/svd.hpp"

namespace tvn {
namespace {

std::size_t product(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int e : shape) n *= static_cast<std::size_t>(e);
  return n;
}

// Cumulative mode-d offsets of the diagonal blocks: block l starts at
// sum_{j<l} m_{d,j}.
std::vector<std::vector<int>> block_offsets(const std::vector<std::vector<int>>& block_shapes,
                                            int num_modes) {
  std::vector<std::vector<int>> off(block_shapes.size(), std::vector<int>(num_modes, 0));
  for (std::size_t l = 1; l < block_shapes.size(); ++l) {
    for (int d = 0; d < num_modes; ++d) {
      off[l][d] = off[l - 1][d] + block_shapes[l - 1][d];
    }
  }
  return off;
}

DenseTensor random_tensor(const std::vector<int>& shape, Rng& rng) {
  std::vector<double> data(product(shape));
  for (double& v : data) v = rng.gaussian();
  return DenseTensor(shape, std::move(data));
}

DenseTensor scaled(const DenseTensor& x, double c) {
  std::vector<double> data = x.data();
  for (double& v : data) v *= c;
  return DenseTensor(x.shape(), std::move(data));
}

// Smallest positive and largest mode-d singular value over all modes.
std::pair<double, double> spectral_range(const DenseTensor& block) {
  double smallest = std::numeric_limits<double>::infinity();
  double largest = 0.0;
  for (int d = 1; d <= block.order(); ++d) {
    for (double s : mode_spectrum(block, d)) {
      if (s > 0.0) smallest = std::min(smallest, s);
      largest = std::max(largest, s);
    }
  }
  return {smallest, largest};
}

Matrix permutation_matrix(const std::vector<int>& image) {
  const int n = static_cast<int>(image.size());
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) p(image[i] - 1, i) = 1.0;
  return p;
}

}  // namespace

VnReport vn_check(const DenseTensor& x, const DenseTensor& y, double tol) {
  if (x.shape() != y.shape()) throw ShapeError("vn_check: tensor shapes disagree");
  if (tol <= 0.0) throw ValidationError("vn_check: tol must be positive");

  VnReport r;
  r.tol = tol;
  r.lhs = inner_product(x, y);
  const double nx = frobenius_norm(x);
  const double ny = frobenius_norm(y);
  r.scale = (nx == 0.0 || ny == 0.0) ? 1.0 : nx * ny;

  const int order = x.order();
  r.rhs_per_mode.resize(order);
  r.gap_per_mode.resize(order);
  r.equality_per_mode.resize(order);
  for (int d = 1; d <= order; ++d) {
    const auto sx = mode_spectrum(x, d);
    const auto sy = mode_spectrum(y, d);
    double rhs = 0.0;
    for (std::size_t k = 0; k < sx.size(); ++k) rhs += sx[k] * sy[k];
    r.rhs_per_mode[d - 1] = rhs;
    r.gap_per_mode[d - 1] = rhs - r.lhs;
    r.equality_per_mode[d - 1] = std::abs(r.gap_per_mode[d - 1]) <= tol * r.scale;
  }
  r.equality_all_modes =
      std::all_of(r.equality_per_mode.begin(), r.equality_per_mode.end(), [](bool b) { return b; });
  return r;
}

void BlockDiagonalSpec::validate() const {
  if (ambient_shape.empty()) throw ValidationError("block spec: ambient shape is empty");
  for (int e : ambient_shape) {
    if (e < 1) throw ValidationError("block spec: ambient extents must be positive");
  }
  if (block_shapes.empty()) throw ValidationError("block spec: no blocks");
  if (ratios.size() != block_shapes.size()) {
    throw ValidationError("block spec: " + std::to_string(ratios.size()) + " ratios for " +
                          std::to_string(block_shapes.size()) + " blocks");
  }
  for (std::size_t l = 0; l < ratios.size(); ++l) {
    if (!(ratios[l] > 0.0)) throw ValidationError("block spec: ratios must be positive");
    if (l > 0 && !(ratios[l - 1] > ratios[l])) {
      throw ValidationError("block spec: ratios must be strictly decreasing");
    }
  }
  const int order = num_modes();
  std::vector<int> used(order, 0);
  for (const auto& bs : block_shapes) {
    if (static_cast<int>(bs.size()) != order) {
      throw ValidationError("block spec: block shape order does not match the ambient shape");
    }
    for (int d = 0; d < order; ++d) {
      if (bs[d] < 1) throw ValidationError("block spec: block extents must be positive");
      used[d] += bs[d];
    }
  }
  for (int d = 0; d < order; ++d) {
    if (used[d] > ambient_shape[d]) {
      throw ValidationError("block spec: blocks overflow mode " + std::to_string(d + 1) + " (" +
                            std::to_string(used[d]) + " > " + std::to_string(ambient_shape[d]) + ")");
    }
  }
}

DenseTensor build_block_diagonal(const BlockDiagonalSpec& spec,
                                 const std::vector<DenseTensor>& blocks) {
  spec.validate();
  if (blocks.size() != spec.block_shapes.size()) {
    throw ShapeError("build_block_diagonal: expected " + std::to_string(spec.block_shapes.size()) +
                     " blocks, got " + std::to_string(blocks.size()));
  }
  const int order = spec.num_modes();
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    if (blocks[l].shape() != spec.block_shapes[l]) {
      throw ShapeError("build_block_diagonal: block " + std::to_string(l + 1) +
                       " does not match its declared shape");
    }
  }
  const auto offsets = block_offsets(spec.block_shapes, order);

  std::vector<double> data(product(spec.ambient_shape), 0.0);
  std::vector<std::size_t> strides(order, 1);
  for (int d = order - 2; d >= 0; --d) {
    strides[d] = strides[d + 1] * static_cast<std::size_t>(spec.ambient_shape[d + 1]);
  }
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    const auto& block = blocks[l];
    std::vector<int> idx(order, 1);  // 1-based within the block
    for (std::size_t flat = 0; flat < block.size(); ++flat) {
      std::size_t off = 0;
      for (int d = 0; d < order; ++d) {
        off += static_cast<std::size_t>(offsets[l][d] + idx[d] - 1) * strides[d];
      }
      data[off] = block.flat(flat);
      int d = order - 1;
      while (d >= 0 && ++idx[d] > block.shape()[d]) idx[d--] = 1;
    }
  }
  return DenseTensor(spec.ambient_shape, std::move(data));
}

ConstructedPair construct_equality_pair(const BlockDiagonalSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const int order = spec.num_modes();
  const int nblocks = spec.num_blocks();

  // Blocks of D(Y), rescaled so each one's mode spectra sit strictly above
  // the next one's; paired with strictly decreasing ratios this keeps the
  // sorted spectra of X and Y aligned block by block.
  std::vector<DenseTensor> y_blocks;
  y_blocks.reserve(nblocks);
  double prev_smallest = 0.0;
  for (int l = 0; l < nblocks; ++l) {
    DenseTensor block = random_tensor(spec.block_shapes[l], rng);
    auto [smallest, largest] = spectral_range(block);
    if (!(largest > 0.0)) {
      throw ValidationError("construct_equality_pair: degenerate zero block draw");
    }
    if (l > 0) {
      block = scaled(block, prev_smallest / (1.25 * largest));
      smallest *= prev_smallest / (1.25 * largest);
    }
    prev_smallest = smallest;
    y_blocks.push_back(std::move(block));
  }

  std::vector<DenseTensor> x_blocks;
  x_blocks.reserve(nblocks);
  for (int l = 0; l < nblocks; ++l) {
    x_blocks.push_back(scaled(y_blocks[l], spec.ratios[l]));
  }

  DenseTensor dy = build_block_diagonal(spec, y_blocks);
  DenseTensor dx = build_block_diagonal(spec, x_blocks);

  std::vector<Matrix> factors;
  factors.reserve(order);
  for (int d = 0; d < order; ++d) {
    factors.push_back(random_orthogonal(spec.ambient_shape[d], rng));
  }

  DenseTensor x = dx;
  DenseTensor y = dy;
  for (int d = 0; d < order; ++d) {
    x = mode_multiply(x, d + 1, factors[d]);
    y = mode_multiply(y, d + 1, factors[d]);
  }

  EqualityWitness w{std::move(factors), std::move(dx), std::move(dy),
                    spec.block_shapes,  spec.ratios,   {},
                    spec.seed};
  return ConstructedPair{std::move(x), std::move(y), std::move(w)};
}

RatioClasses ratio_classes(const HosvdFactors& fx, const HosvdFactors& fy, double group_tol) {
  if (fx.core.shape() != fy.core.shape()) {
    throw ShapeError("ratio_classes: factor sets come from different ambient shapes");
  }
  if (group_tol <= 0.0) throw ValidationError("ratio_classes: group_tol must be positive");
  const int order = fx.core.order();

  struct Entry {
    double value;
    int mode;   // 0-based
    int index;  // 1-based spectrum index
  };
  std::vector<Entry> entries;
  for (int d = 0; d < order; ++d) {
    const auto& sx = fx.spectra[d];
    const auto& sy = fy.spectra[d];
    for (int k = 0; k < fx.ranks[d]; ++k) {
      if (k >= fy.ranks[d]) {
        throw RankMismatchError("ratio_classes: mode " + std::to_string(d + 1) + " index " +
                                std::to_string(k + 1) +
                                " has positive X spectrum but zero Y spectrum");
      }
      entries.push_back({sx[k] / sy[k], d, k + 1});
    }
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.mode != b.mode) return a.mode < b.mode;
    return a.index < b.index;
  });

  RatioClasses rc;
  rc.index_sets.assign(order, {});
  std::vector<std::vector<Entry>> classes;
  double representative = 0.0;
  for (const Entry& e : entries) {
    if (classes.empty() || representative - e.value > group_tol * representative) {
      classes.emplace_back();
      representative = e.value;
    }
    classes.back().push_back(e);
  }
  for (const auto& cls : classes) {
    double mean = 0.0;
    for (const Entry& e : cls) mean += e.value;
    rc.ratios.push_back(mean / static_cast<double>(cls.size()));
  }
  for (int d = 0; d < order; ++d) {
    rc.index_sets[d].assign(classes.size(), {});
  }
  for (std::size_t l = 0; l < classes.size(); ++l) {
    for (const Entry& e : classes[l]) {
      rc.index_sets[e.mode][l].push_back(e.index);
    }
  }
  for (auto& per_mode : rc.index_sets) {
    for (auto& set : per_mode) std::sort(set.begin(), set.end());
  }
  return rc;
}

EqualityWitness extract_equality_structure(const DenseTensor& x, const DenseTensor& y, double tol) {
  if (x.shape() != y.shape()) throw ShapeError("extract_equality_structure: shapes disagree");
  const double nx = frobenius_norm(x);
  const double ny = frobenius_norm(y);
  if (nx == 0.0 || ny == 0.0) {
    throw PreconditionError("extract_equality_structure: zero tensor input");
  }
  const VnReport rep = vn_check(x, y, tol);
  if (!rep.equality_all_modes) {
    throw PreconditionError("extract_equality_structure: equality does not hold at tol");
  }

  const int order = x.order();
  HosvdFactors fx = hosvd(x);
  HosvdFactors fy = hosvd(y);

  // Shared factors: per mode, the SVD basis of the higher-rank spectrum
  // pins more of the common singular subspaces (ties go to X).
  std::vector<Matrix> shared(order);
  for (int d = 0; d < order; ++d) {
    shared[d] = fx.ranks[d] >= fy.ranks[d] ? fx.factors[d] : fy.factors[d];
  }

  DenseTensor sx = x;
  DenseTensor sy = y;
  for (int d = 0; d < order; ++d) {
    sx = mode_multiply(sx, d + 1, transposed(shared[d]));
    sy = mode_multiply(sy, d + 1, transposed(shared[d]));
  }

  // Row-proportionality residual: sigma_d_k(Y) * S(X) and
  // sigma_d_k(X) * S(Y) must agree entry-wise on every mode.
  const double res_scale = nx * ny;
  const auto strides = [&] {
    std::vector<std::size_t> s(order, 1);
    for (int d = order - 2; d >= 0; --d) s[d] = s[d + 1] * static_cast<std::size_t>(x.shape()[d + 1]);
    return s;
  }();
  for (int d = 0; d < order; ++d) {
    for (std::size_t flat = 0; flat < sx.size(); ++flat) {
      const int k = static_cast<int>((flat / strides[d]) % static_cast<std::size_t>(x.shape()[d]));
      const double residual = fy.spectra[d][k] * sx.flat(flat) - fx.spectra[d][k] * sy.flat(flat);
      if (std::abs(residual) > tol * res_scale) {
        throw DegeneracyError("extract_equality_structure: core rows of mode " +
                              std::to_string(d + 1) + " are not proportional at spectrum index " +
                              std::to_string(k + 1) + " (residual " + std::to_string(residual) +
                              ")");
      }
    }
  }

  // Ratio clustering tolerance: wide enough to absorb rounding in the
  // spectra, far below any meaningful class separation.
  RatioClasses rc = ratio_classes(fx, fy, std::sqrt(tol));
  const int nclasses = rc.num_classes();
  std::vector<std::vector<int>> block_shapes(nclasses, std::vector<int>(order, 0));
  for (int l = 0; l < nclasses; ++l) {
    for (int d = 0; d < order; ++d) {
      const int m = rc.count(d, l);
      if (m == 0) {
        throw DegeneracyError("extract_equality_structure: ratio class " + std::to_string(l + 1) +
                              " has no indices in mode " + std::to_string(d + 1));
      }
      block_shapes[l][d] = m;
    }
  }

  // Permutations sending each class to a contiguous run, classes in ratio
  // order, unclassified indices appended.
  std::vector<std::vector<int>> permutations(order);
  std::vector<Matrix> perm_matrices(order);
  for (int d = 0; d < order; ++d) {
    const int nd = x.shape()[d];
    std::vector<int> new_order;
    new_order.reserve(nd);
    std::vector<bool> taken(nd + 1, false);
    for (int l = 0; l < nclasses; ++l) {
      for (int k : rc.index_sets[d][l]) {
        new_order.push_back(k);
        taken[k] = true;
      }
    }
    for (int k = 1; k <= nd; ++k) {
      if (!taken[k]) new_order.push_back(k);
    }
    std::vector<int> image(nd);
    for (int pos = 0; pos < nd; ++pos) image[new_order[pos] - 1] = pos + 1;
    permutations[d] = image;
    perm_matrices[d] = permutation_matrix(image);
  }

  DenseTensor dx = sx;
  DenseTensor dy = sy;
  for (int d = 0; d < order; ++d) {
    dx = mode_multiply(dx, d + 1, perm_matrices[d]);
    dy = mode_multiply(dy, d + 1, perm_matrices[d]);
  }

  // Everything outside the blocks must be numerically null inside the rank
  // box; beyond the ranks the slices carry only rounding noise. Surviving
  // mass is a structure failure, anything below the threshold is zeroed so
  // the witness diagonals are exactly block-supported.
  const auto offsets = block_offsets(block_shapes, order);
  const double zx = tol * frobenius_norm(sx);
  const double zy = tol * frobenius_norm(sy);
  std::vector<double> dx_data = dx.data();
  std::vector<double> dy_data = dy.data();
  std::vector<int> rank_box(order);
  for (int d = 0; d < order; ++d) rank_box[d] = std::max(fx.ranks[d], fy.ranks[d]);
  std::vector<int> idx(order, 1);
  for (std::size_t flat = 0; flat < dx_data.size(); ++flat) {
    int owner = -1;
    for (int l = 0; l < nclasses && owner < 0; ++l) {
      bool inside = true;
      for (int d = 0; d < order; ++d) {
        const int rel = idx[d] - offsets[l][d];
        if (rel < 1 || rel > block_shapes[l][d]) {
          inside = false;
          break;
        }
      }
      if (inside) owner = l;
    }
    if (owner < 0) {
      bool in_rank_box = true;
      for (int d = 0; d < order; ++d) {
        if (idx[d] > rank_box[d]) {
          in_rank_box = false;
          break;
        }
      }
      if (in_rank_box && (std::abs(dx_data[flat]) > zx || std::abs(dy_data[flat]) > zy)) {
        throw DegeneracyError(
            "extract_equality_structure: mass outside the diagonal blocks inside the rank box");
      }
      dx_data[flat] = 0.0;
      dy_data[flat] = 0.0;
    } else {
      // Certify block proportionality: ratio classes that were merged by
      // the clustering (or drifted) cannot be expressed by one ratio per
      // block, and a witness must not be returned for them.
      const double residual = dx_data[flat] - rc.ratios[owner] * dy_data[flat];
      if (std::abs(residual) > tol * (nx + rc.ratios[owner] * ny)) {
        throw DegeneracyError("extract_equality_structure: block " + std::to_string(owner + 1) +
                              " is not proportional at ratio " + std::to_string(rc.ratios[owner]) +
                              " (distinct ratio classes may be too close to separate)");
      }
    }
    int d = order - 1;
    while (d >= 0 && ++idx[d] > x.shape()[d]) idx[d--] = 1;
  }

  std::vector<Matrix> factors_w(order);
  for (int d = 0; d < order; ++d) {
    factors_w[d] = matmul(shared[d], transposed(perm_matrices[d]));
  }

  return EqualityWitness{std::move(factors_w),
                         DenseTensor(x.shape(), std::move(dx_data)),
                         DenseTensor(x.shape(), std::move(dy_data)),
                         std::move(block_shapes),
                         rc.ratios,
                         std::move(permutations),
                         std::nullopt};
}

}  // namespace tvn
