#pragma once

#include "starcyl/deformation.hpp"
#include "starcyl/grid_function.hpp"

namespace starcyl {

// Basis of a truncated spinor-valued Fourier space. Vectors are stored in the
// sqrt(mu)-rescaled coordinates, so the flat inner product of coefficient
// vectors equals the mu-weighted one and the flat adjoint is the Hilbert
// adjoint. Ordering: modes row-major over the box, spinor index fastest.
struct ModeBasis {
  Geometry geometry;
  ModeBox box;
  int spinor_dim = 1;

  std::int64_t modes() const { return box.size(); }
  std::int64_t size() const { return modes() * spinor_dim; }
  std::int64_t index(const std::vector<int>& m, int s) const {
    return box.index(m) * spinor_dim + s;
  }
  std::vector<int> mode_of(std::int64_t flat) const { return box.unindex(flat / spinor_dim); }
  double mu() const { return geometry.mu_weight(); }
};

inline ModeBasis make_basis(const Geometry& g, int cutoff, int spinor_dim = 1) {
  if (cutoff < 0 || cutoff > g.cutoff())
    throw std::invalid_argument("basis cutoff exceeds geometry cutoff");
  ModeBasis b{g, ModeBox{std::vector<int>(size_t(g.dim()), cutoff)}, spinor_dim};
  return b;
}

// Dense operator on a ModeBasis.
struct DiscreteOperator {
  ModeBasis basis;
  Mat matrix;

  void check() const {
    if (matrix.rows() != basis.size() || matrix.cols() != basis.size())
      throw std::invalid_argument("operator/basis size mismatch");
  }
  static DiscreteOperator zero(const ModeBasis& b) {
    return DiscreteOperator{b, Mat::Zero(b.size(), b.size())};
  }
};

// Fourier multiplier: one spinor block per mode. The dense form is block
// diagonal; many spectral quantities only need the blocks.
struct BlockDiagOperator {
  ModeBasis basis;
  std::vector<Mat> blocks;  // one (spinor_dim x spinor_dim) block per mode

  DiscreteOperator dense() const {
    DiscreteOperator op = DiscreteOperator::zero(basis);
    const int s = basis.spinor_dim;
    for (std::int64_t m = 0; m < basis.modes(); ++m)
      op.matrix.block(m * s, m * s, s, s) = blocks[size_t(m)];
    return op;
  }
};

}  // namespace starcyl
