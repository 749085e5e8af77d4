#pragma once

#include "starcyl/cocycle.hpp"
#include "starcyl/krein.hpp"

namespace starcyl {

struct AdmissibilityReport {
  double commutant_residual = 0;   // J vs the represented algebra
  double one_form_residual = 0;    // J pi(Omega^1) J back into the span
  double gram_hermiticity = 0;     // Krein-form Gram of the candidate
  double gram_min_eigenvalue = 0;  // positivity of <., J.>
  RMat reflection;                 // recovered r with J = J_r
  double reflection_residual = 0;  // worst reflection invariant violation
  double pass_threshold = 1e-6;
  bool passed = false;
};

// Checks an involutive candidate J on the full (modes x spinor) space:
// (a) commutation with a sample of represented algebra elements,
// (b) stability of the represented one-form span under conjugation,
// (c) positivity of the induced inner product against the canonical Krein
//     form, and
// (d) factorization J gamma(v) J = -gamma(r v) with r a spacelike reflection.
inline AdmissibilityReport admissibility_check(const Mat& J_candidate,
                                               const std::vector<FourierFunction>& algebra_sample,
                                               const DeformationParams& params,
                                               const CliffordRep& rep, int basis_cutoff) {
  if (algebra_sample.empty()) throw std::invalid_argument("admissibility: empty sample");
  const Geometry& g = algebra_sample[0].geometry;
  ModeBasis basis = make_basis(g, basis_cutoff, rep.spinor_dim);
  const std::int64_t N = basis.size();
  if (J_candidate.rows() != N || J_candidate.cols() != N)
    throw std::invalid_argument("admissibility: candidate has wrong shape");
  if ((J_candidate * J_candidate - Mat::Identity(N, N)).norm() > 1e-10 * double(N))
    throw std::invalid_argument("admissibility: candidate is not an involution");

  AdmissibilityReport rep_out;
  const int s = rep.spinor_dim;

  // scalar regular representations extended over the spinor factor
  std::vector<Mat> reps;
  for (const auto& phi : algebra_sample) {
    DiscreteOperator op = regular_representation(phi, params, Side::left, basis_cutoff);
    Mat full = Mat::Zero(N, N);
    for (std::int64_t i = 0; i < basis.modes(); ++i)
      for (std::int64_t j = 0; j < basis.modes(); ++j) {
        if (op.matrix(i, j) == cplx{0, 0}) continue;
        for (int a = 0; a < s; ++a) full(i * s + a, j * s + a) = op.matrix(i, j);
      }
    reps.push_back(std::move(full));
  }

  // (a)
  double comm = 0;
  for (const auto& A : reps) {
    const double scale = std::max(1e-300, A.norm() * J_candidate.norm());
    comm = std::max(comm, (J_candidate * A - A * J_candidate).norm() / scale);
  }
  rep_out.commutant_residual = comm;

  // (b): span of pi(a) gamma(v) over the samples and the gamma basis
  const int m = rep.dim();
  std::vector<Mat> span;
  for (const auto& A : reps)
    for (int a = 0; a < m; ++a) {
      Mat gam = extend_to_basis(rep.gammas[size_t(a)], basis);
      span.push_back(A * gam);
    }
  Mat S(N * N, Eigen::Index(span.size()));
  for (size_t c = 0; c < span.size(); ++c)
    S.col(Eigen::Index(c)) = Eigen::Map<const Vec>(span[c].data(), N * N);
  Eigen::ColPivHouseholderQR<Mat> qr(S);
  double omega = 0;
  for (const auto& B : span) {
    Mat img = J_candidate * B * J_candidate;
    Vec v = Eigen::Map<const Vec>(img.data(), N * N);
    Vec x = qr.solve(v);
    omega = std::max(omega, (S * x - v).norm() / std::max(1e-300, v.norm()));
  }
  rep_out.one_form_residual = omega;

  // (c): Gram of <., J.> against the canonical Krein form
  Mat jcan = extend_to_basis(canonical_symmetry(rep).J, basis);
  Mat gram = jcan * J_candidate;
  rep_out.gram_hermiticity = (gram - gram.adjoint()).norm() / std::max(1.0, gram.norm());
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.adjoint()));
  rep_out.gram_min_eigenvalue = es.eigenvalues().minCoeff();

  // (d): spinor-local action and the reflection it encodes
  Mat jsp = Mat::Zero(s, s);
  for (std::int64_t i = 0; i < basis.modes(); ++i) jsp += J_candidate.block(i * s, i * s, s, s);
  jsp /= double(basis.modes());
  RMat r(m, m);
  double imag_resid = 0;
  for (int a = 0; a < m; ++a) {
    Mat img = -jsp * rep.gammas[size_t(a)] * jsp;
    for (int b = 0; b < m; ++b) {
      const cplx coef = (rep.gammas[size_t(b)].adjoint() * img).trace() / double(s);
      r(b, a) = coef.real();
      imag_resid = std::max(imag_resid, std::abs(coef.imag()));
    }
  }
  rep_out.reflection = r;
  RMat etam = rep.eta.asDiagonal();
  const double d1 = (r.transpose() * etam * r - etam).cwiseAbs().maxCoeff();
  const double d2 = (r * r - RMat::Identity(m, m)).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<RMat> res(0.5 * (etam * r + (etam * r).transpose()));
  const double d3 = std::max(0.0, -res.eigenvalues().minCoeff());
  rep_out.reflection_residual = std::max({d1, d2, d3, imag_resid});

  const double t = rep_out.pass_threshold;
  rep_out.passed = rep_out.commutant_residual < 1e-8 && rep_out.one_form_residual < t &&
                   rep_out.gram_hermiticity < t && rep_out.gram_min_eigenvalue > -1e-10 &&
                   rep_out.reflection_residual < 1e-6;
  return rep_out;
}

}  // namespace starcyl
