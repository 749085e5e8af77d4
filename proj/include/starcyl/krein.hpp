#pragma once

#include "starcyl/clifford.hpp"
#include "starcyl/operators.hpp"

namespace starcyl {

// Metric-compatible involution of the flat directions with g(., r.) positive
// definite. Its -1 eigenspace F1 is the timelike block.
struct SpacelikeReflection {
  RMat r;

  void validate(const RVec& eta) const {
    const Eigen::Index m = eta.size();
    if (r.rows() != m || r.cols() != m) throw std::invalid_argument("reflection: wrong shape");
    RMat etam = eta.asDiagonal();
    if ((r.transpose() * etam * r - etam).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("reflection: not metric-compatible");
    if ((r * r - RMat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("reflection: not an involution");
    Eigen::SelfAdjointEigenSolver<RMat> es(etam * r);
    if (es.eigenvalues().minCoeff() <= 0)
      throw std::invalid_argument("reflection: eta(., r.) not positive definite");
  }
};

// Fundamental symmetry on the spinor factor. `gram` is the matrix of the
// induced Hilbert inner product <.,.>_J = (., J.) in flat coordinates, i.e.
// J_canonical * J; it is Hermitian positive definite. Hermiticity of J itself
// is with respect to that induced inner product (for the canonical symmetry
// the two notions coincide and J is flat-Hermitian).
struct KreinStructure {
  Mat J;
  Mat gram;
};

// Product of the timelike gammas with the unique unit phase enforcing
// J^2 = 1 and flat Hermiticity. Defines the Krein form of the spinor space;
// for Lorentzian (p = 1) this is i*gamma^0. Euclidean (p = 0) gives the
// identity.
inline KreinStructure canonical_symmetry(const CliffordRep& rep) {
  Mat prod = Mat::Identity(rep.spinor_dim, rep.spinor_dim);
  for (int a = 0; a < rep.p; ++a) prod = prod * rep.gammas[size_t(a)];
  for (cplx z : {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
    Mat cand = z * prod;
    if ((cand * cand - Mat::Identity(rep.spinor_dim, rep.spinor_dim)).norm() < 1e-12 &&
        (cand - cand.adjoint()).norm() < 1e-12)
      return KreinStructure{cand, Mat::Identity(rep.spinor_dim, rep.spinor_dim)};
  }
  throw std::logic_error("canonical_symmetry: no phase closes");
}

// J_r = unit phase * gamma(e_0)...gamma(e_{p-1}) over an orthonormal frame of
// the -1 eigenspace of r, phase fixed by J^2 = 1, Hermiticity of the induced
// Gram, and positive definiteness of <.,.>_{J_r}.
inline KreinStructure reflection_to_J(const CliffordRep& rep, const SpacelikeReflection& refl) {
  refl.validate(rep.eta);
  const int m = rep.dim();
  if (rep.p == 0) {
    Mat id = Mat::Identity(rep.spinor_dim, rep.spinor_dim);
    return KreinStructure{id, id};
  }
  // -1 eigenspace of r
  Eigen::EigenSolver<RMat> es(refl.r);
  std::vector<RVec> basis;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(es.eigenvalues()[i].real() + 1.0) < 1e-8 &&
        std::abs(es.eigenvalues()[i].imag()) < 1e-8)
      basis.push_back(es.eigenvectors().col(i).real());
  }
  if (int(basis.size()) != rep.p)
    throw std::invalid_argument("reflection: timelike eigenspace dimension != p");
  // Gram-Schmidt with respect to g^r = eta(., r.) (= -eta on F1)
  RMat etam = rep.eta.asDiagonal();
  auto gr = [&](const RVec& u, const RVec& v) { return -u.dot(etam * v); };
  std::vector<RVec> frame;
  for (auto v : basis) {
    for (auto& e : frame) v -= gr(e, v) * e;
    const double nn = gr(v, v);
    if (nn <= 1e-14) throw std::invalid_argument("reflection: degenerate timelike frame");
    frame.push_back(v / std::sqrt(nn));
  }
  Mat prod = Mat::Identity(rep.spinor_dim, rep.spinor_dim);
  for (auto& e : frame) prod = prod * rep.gamma_of(e);
  const Mat jcan = canonical_symmetry(rep).J;
  for (cplx z : {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
    Mat cand = z * prod;
    if ((cand * cand - Mat::Identity(rep.spinor_dim, rep.spinor_dim)).norm() > 1e-10) continue;
    Mat gram = jcan * cand;
    if ((gram - gram.adjoint()).norm() > 1e-10) continue;
    Eigen::SelfAdjointEigenSolver<Mat> ges(gram);
    if (ges.eigenvalues().minCoeff() > 0) return KreinStructure{cand, gram};
  }
  throw std::invalid_argument("reflection_to_J: no admissible phase");
}

// Indefinite inner product (psi, phi) = sum_i conj(psi_i) (J phi)_i, with an
// optional quadrature weight when the vectors represent sections.
inline cplx krein_inner(const Vec& psi, const Vec& phi, const Mat& J_full, double weight = 1.0) {
  if (psi.size() != phi.size() || psi.size() != J_full.rows())
    throw std::invalid_argument("krein_inner: length mismatch");
  return weight * psi.dot(J_full * phi);
}

inline Mat extend_to_basis(const Mat& j_spinor, const ModeBasis& basis) {
  if (j_spinor.rows() != basis.spinor_dim)
    throw std::invalid_argument("extend_to_basis: spinor dimension mismatch");
  Mat out = Mat::Zero(basis.size(), basis.size());
  const int s = basis.spinor_dim;
  for (std::int64_t m = 0; m < basis.modes(); ++m) out.block(m * s, m * s, s, s) = j_spinor;
  return out;
}

// Krein adjoint A^[*] = J A^dag J (dagger in the orthonormalized basis).
inline Mat krein_adjoint(const Mat& A, const Mat& J_full) {
  if (A.rows() != A.cols() || A.rows() != J_full.rows())
    throw std::invalid_argument("krein_adjoint: shape mismatch");
  return J_full * A.adjoint() * J_full;
}

inline DiscreteOperator krein_adjoint(const DiscreteOperator& A, const Mat& j_spinor) {
  Mat J = extend_to_basis(j_spinor, A.basis);
  return DiscreteOperator{A.basis, krein_adjoint(A.matrix, J)};
}

// (D)_J = (D D^dag + D^dag D)/2 and Delta_J = ((D)_J + 1)^{1/2}, for a
// Krein-self-adjoint D. The square root is a Hermitian eigendecomposition
// with eigenvalue floor 1 (exact since (D)_J >= 0).
inline std::pair<Mat, Mat> j_square_delta(const Mat& D, const Mat& J_full, double tol = 1e-10) {
  const double scale = std::max(1.0, D.norm());
  if ((D - J_full * D.adjoint() * J_full).norm() > tol * scale)
    throw std::invalid_argument("j_square_delta: D is not Krein-self-adjoint");
  Mat dj = 0.5 * (D * D.adjoint() + D.adjoint() * D);
  dj = 0.5 * (dj + dj.adjoint());
  Mat delta = hermitian_sqrt(dj + Mat::Identity(D.rows(), D.cols()), 1.0);
  return {dj, delta};
}

inline std::pair<DiscreteOperator, DiscreteOperator> j_square_delta(const DiscreteOperator& D,
                                                                    const Mat& j_spinor) {
  Mat J = extend_to_basis(j_spinor, D.basis);
  auto [dj, delta] = j_square_delta(D.matrix, J);
  return {DiscreteOperator{D.basis, dj}, DiscreteOperator{D.basis, delta}};
}

// Blockwise version for Fourier multipliers.
inline std::pair<BlockDiagOperator, BlockDiagOperator> j_square_delta(const BlockDiagOperator& D,
                                                                      const Mat& j_spinor) {
  BlockDiagOperator dj{D.basis, {}}, delta{D.basis, {}};
  dj.blocks.reserve(D.blocks.size());
  delta.blocks.reserve(D.blocks.size());
  for (const auto& b : D.blocks) {
    auto [x, y] = j_square_delta(b, j_spinor);
    dj.blocks.push_back(std::move(x));
    delta.blocks.push_back(std::move(y));
  }
  return {dj, delta};
}

}  // namespace starcyl
