#pragma once

#include "starcyl/dirac.hpp"
#include "starcyl/dixmier.hpp"
#include "starcyl/fourier.hpp"

namespace starcyl {

enum class IntegralKind { euclidean_dirac, lorentzian_deltaJ, scalar_laplacian };

inline double sphere_volume(int n) {  // Omega_n = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0);
}

struct IntegralOptions {
  std::vector<int> cutoffs;  // operator mode cutoffs per direction
  Ladder ladder;
};

namespace detail {

// Kernel weight per mode and its spinor multiplicity; zero modes of the
// scalar/Dirac kernels are dropped (finite-rank perturbations do not move
// the Dixmier trace).
inline double kernel_weight(IntegralKind kind, double k2, int m) {
  switch (kind) {
    case IntegralKind::scalar_laplacian: {
      const double lam = 4 * pi * pi * k2;
      return lam > 0 ? std::pow(lam, -m / 2.0) : 0.0;
    }
    case IntegralKind::euclidean_dirac: {
      const double a = 2 * pi * std::sqrt(k2);
      return a > 0 ? std::pow(a, -double(m)) : 0.0;
    }
    case IntegralKind::lorentzian_deltaJ:
      return std::pow(std::sqrt(1.0 + 4 * pi * pi * k2), -double(m));
  }
  return 0.0;
}

inline bool is_spinor_kind(IntegralKind kind) { return kind != IntegralKind::scalar_laplacian; }

}  // namespace detail

// Noncommutative integral of a nonnegative test function f: Dixmier-trace
// estimate of M_f^{1/2} T M_f^{1/2} with T the inverse-power kernel of the
// chosen operator, scaled by the dimension coefficient
//   m (2 pi)^m / Omega_m            (scalar kernels)
//   m (2 pi)^m / (2^[m/2] Omega_m)  (spinor kernels).
inline FittedConstant nc_integral(const GridFunction& f, IntegralKind kind,
                                  const IntegralOptions& opt) {
  f.check();
  const Geometry& g = f.geometry;
  const int m = g.dim();
  if (int(opt.cutoffs.size()) != m) throw std::invalid_argument("nc_integral: cutoffs size");
  // admissibility of f: real, nonnegative, supported in the safe window
  double neg = 0, outside = 0, total = 0;
  {
    const int gp = g.grid_pts;
    std::vector<int> idx(size_t(m), {});
    for (std::int64_t flat = 0; flat < f.samples.size(); ++flat) {
      const double im = std::abs(f.samples[flat].imag());
      const double re = f.samples[flat].real();
      if (im > 1e-12) throw std::invalid_argument("nc_integral: f must be real");
      neg = std::min(neg, re);
      std::int64_t rest = flat;
      bool out = false;
      for (int i = m - 1; i >= 0; --i) {
        idx[size_t(i)] = int(rest % gp);
        rest /= gp;
      }
      for (int i = 0; i < g.n; ++i) {
        const double x = g.position(i, idx[size_t(i)]);
        if (std::abs(x) > g.L / 4) out = true;
      }
      total += std::abs(re);
      if (out) outside += std::abs(re);
    }
    if (neg < -1e-10) throw std::invalid_argument("nc_integral: f must be nonnegative");
    if (total > 0 && outside / total > 1e-8)
      throw std::invalid_argument("nc_integral: f mass outside safe window");
  }

  const int sdim = detail::is_spinor_kind(kind) ? (1 << (m / 2)) : 1;
  const ModeBox box{opt.cutoffs};
  const std::int64_t nm = box.size();
  std::vector<double> w(size_t(nm), {});
  for (std::int64_t i = 0; i < nm; ++i) {
    const auto mi = box.unindex(i);
    double k2 = 0;
    for (int a = 0; a < m; ++a) {
      const double ka = mi[size_t(a)] * g.mode_step(a);
      k2 += ka * ka;
    }
    w[size_t(i)] = detail::kernel_weight(kind, k2, m);
  }

  const double fmin = f.samples.real().minCoeff(), fmax = f.samples.real().maxCoeff();
  RVec spectrum;
  if (fmax - fmin < 1e-12 * std::max(1.0, std::abs(fmax))) {
    // constant f: the multiplication operator is exactly fmax * identity
    spectrum.resize(nm * sdim);
    for (std::int64_t i = 0; i < nm; ++i)
      for (int s = 0; s < sdim; ++s) spectrum[i * sdim + s] = fmax * w[size_t(i)];
  } else {
    // dense scalar block: Mf^{1/2} diag(w) Mf^{1/2}, spinor factor replicated
    FourierFunction fh = forward_transform(f);
    for (int a = 0; a < m; ++a)
      if (2 * opt.cutoffs[size_t(a)] > fh.box.cutoffs[size_t(a)])
        throw std::invalid_argument("nc_integral: geometry grid too coarse for cutoffs");
    Mat Mf(nm, nm);
    const double mu = g.mu_weight();
    for (std::int64_t i = 0; i < nm; ++i) {
      const auto mi = box.unindex(i);
      for (std::int64_t j = 0; j < nm; ++j) {
        const auto mj = box.unindex(j);
        std::vector<int> dm(size_t(m), {});
        for (int a = 0; a < m; ++a) dm[size_t(a)] = mi[size_t(a)] - mj[size_t(a)];
        Mf(i, j) = mu * fh.at(dm);
      }
    }
    Mat sq = hermitian_sqrt(0.5 * (Mf + Mf.adjoint()), 0.0);
    Mat op = sq * Eigen::Map<RVec>(w.data(), nm).asDiagonal() * sq;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (op + op.adjoint()),
                                          Eigen::EigenvaluesOnly);
    RVec ev = es.eigenvalues().cwiseMax(0.0);
    spectrum.resize(nm * sdim);
    for (std::int64_t i = 0; i < nm; ++i)
      for (int s = 0; s < sdim; ++s) spectrum[i * sdim + s] = ev[i];
  }

  SpectralSummary sum = dixmier_from_values(spectrum, opt.ladder, "nc_integral");
  double coeff = m * std::pow(2 * pi, m) / sphere_volume(m);
  if (detail::is_spinor_kind(kind)) coeff /= double(1 << (m / 2));
  FittedConstant out;
  out.value = coeff * sum.extrapolated.value;
  out.std_error = coeff * sum.extrapolated.std_error;
  out.context = "nc_integral";
  return out;
}

}  // namespace starcyl
