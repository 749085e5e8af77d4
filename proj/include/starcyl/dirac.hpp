#pragma once

#include "starcyl/krein.hpp"

namespace starcyl {

namespace detail {
inline void check_signature(const CliffordRep& rep, const Geometry& g) {
  if (rep.dim() != g.dim()) throw std::invalid_argument("dirac: dimension mismatch");
  const int want_p = (g.signature == Signature::lorentzian) ? 1 : 0;
  if (rep.p != want_p) throw std::invalid_argument("dirac: signature mismatch with geometry");
}
}  // namespace detail

// Flat Dirac operator as a Fourier multiplier. Euclidean block 2 pi k.gamma
// (self-adjoint, eigenvalues +-2 pi |k|); Lorentzian block 2 pi i k.gamma
// (Krein-self-adjoint for J = i gamma^0).
inline BlockDiagOperator dirac_blocks(const CliffordRep& rep, const Geometry& g, int cutoff) {
  detail::check_signature(rep, g);
  ModeBasis basis = make_basis(g, cutoff, rep.spinor_dim);
  BlockDiagOperator op{basis, {}};
  op.blocks.reserve(size_t(basis.modes()));
  const cplx unit = (g.signature == Signature::lorentzian) ? cplx(0, 2 * pi) : cplx(2 * pi, 0);
  for (std::int64_t i = 0; i < basis.modes(); ++i) {
    const auto m = basis.box.unindex(i);
    Mat b = Mat::Zero(rep.spinor_dim, rep.spinor_dim);
    for (int a = 0; a < g.dim(); ++a) b += (unit * (m[size_t(a)] * g.mode_step(a))) * rep.gammas[size_t(a)];
    op.blocks.push_back(std::move(b));
  }
  return op;
}

inline DiscreteOperator build_dirac(const CliffordRep& rep, const Geometry& g, int cutoff) {
  return dirac_blocks(rep, g, cutoff).dense();
}

// Spectral sign with sign(0) = +1; F^2 = 1, F self-adjoint, [F, D] = 0.
inline Mat sign_of_hermitian(const Mat& D, double tol = 1e-10) {
  if ((D - D.adjoint()).norm() > tol * std::max(1.0, D.norm()))
    throw std::invalid_argument("sign_operator: input not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (D + D.adjoint()));
  RVec s = es.eigenvalues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = (s[i] >= 0) ? 1.0 : -1.0;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

inline DiscreteOperator sign_operator(const DiscreteOperator& D) {
  return DiscreteOperator{D.basis, sign_of_hermitian(D.matrix)};
}

inline BlockDiagOperator sign_operator(const BlockDiagOperator& D) {
  BlockDiagOperator F{D.basis, {}};
  F.blocks.reserve(D.blocks.size());
  for (const auto& b : D.blocks) F.blocks.push_back(sign_of_hermitian(b));
  return F;
}

}  // namespace starcyl
