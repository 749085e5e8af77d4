#pragma once

#include "starcyl/numeric.hpp"

namespace starcyl {

// Gamma matrices for flat signature (p, q): p directions squaring to -1
// (anti-Hermitian), then q squaring to +1 (Hermitian). Entries are exact
// products of 0, +-1, +-i, so the anticommutation relations hold to machine
// epsilon.
struct CliffordRep {
  int p = 0, q = 0;
  int spinor_dim = 1;
  std::vector<Mat> gammas;
  RVec eta;  // diagonal metric: p entries -1 then q entries +1

  int dim() const { return p + q; }
  Mat gamma_of(const Vec& v) const {
    Mat out = Mat::Zero(spinor_dim, spinor_dim);
    for (int a = 0; a < dim(); ++a) out += v[a] * gammas[size_t(a)];
    return out;
  }
  Mat gamma_of(const RVec& v) const {
    Mat out = Mat::Zero(spinor_dim, spinor_dim);
    for (int a = 0; a < dim(); ++a) out += v[a] * gammas[size_t(a)];
    return out;
  }
};

namespace detail {

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat pauli(int which) {
  Mat s(2, 2);
  switch (which) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

// Euclidean Hermitian generators, built by doubling:
// E(1) = {[1]}, E(2k+1) = E(2k) + grading, E(2k+2) = {g (x) sz} + {1 (x) sx, 1 (x) sy}.
inline std::vector<Mat> euclidean_gammas(int m) {
  if (m == 1) return {Mat::Ones(1, 1)};
  if (m == 2) return {pauli(1), pauli(2)};
  if (m % 2 == 1) {
    auto base = euclidean_gammas(m - 1);
    Mat prod = Mat::Identity(base[0].rows(), base[0].cols());
    for (auto& g : base) prod = prod * g;
    // unit phase making the product Hermitian with square +1
    for (cplx z : {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
      Mat cand = z * prod;
      if ((cand * cand - Mat::Identity(cand.rows(), cand.cols())).norm() < 1e-12 &&
          (cand - cand.adjoint()).norm() < 1e-12) {
        base.push_back(cand);
        return base;
      }
    }
    throw std::logic_error("euclidean_gammas: no phase closes the odd case");
  }
  auto base = euclidean_gammas(m - 2);
  const Eigen::Index s = base[0].rows();
  std::vector<Mat> out;
  for (auto& g : base) out.push_back(kron(g, pauli(3)));
  out.push_back(kron(Mat::Identity(s, s), pauli(1)));
  out.push_back(kron(Mat::Identity(s, s), pauli(2)));
  return out;
}

}  // namespace detail

inline CliffordRep build_gammas(int p, int q) {
  const int m = p + q;
  if (m < 1 || m > 8) throw std::invalid_argument("build_gammas: supported for 1 <= p+q <= 8");
  CliffordRep rep;
  rep.p = p;
  rep.q = q;
  rep.gammas = detail::euclidean_gammas(m);
  rep.spinor_dim = int(rep.gammas[0].rows());
  for (int a = 0; a < p; ++a) rep.gammas[size_t(a)] *= cplx(0, 1);
  rep.eta = RVec::Ones(m);
  for (int a = 0; a < p; ++a) rep.eta[a] = -1.0;
  return rep;
}

// Grading: unit-phase multiple of gamma^1...gamma^m with chi^2 = 1, chi
// Hermitian; anticommutes with every gamma when m is even. Odd dimension has
// no grading and the convention chi = 1 is returned.
inline Mat grading_chi(const CliffordRep& rep) {
  if (rep.dim() % 2 == 1) return Mat::Identity(rep.spinor_dim, rep.spinor_dim);
  Mat prod = Mat::Identity(rep.spinor_dim, rep.spinor_dim);
  for (auto& g : rep.gammas) prod = prod * g;
  for (cplx z : {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
    Mat cand = z * prod;
    if ((cand * cand - Mat::Identity(rep.spinor_dim, rep.spinor_dim)).norm() < 1e-12 &&
        (cand - cand.adjoint()).norm() < 1e-12)
      return cand;
  }
  throw std::logic_error("grading_chi: no phase closes");
}

}  // namespace starcyl
