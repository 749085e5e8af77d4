#pragma once

#include "starcyl/geometry.hpp"

namespace starcyl {

// Deformation data: scale hbar and a real skew bilinear form theta on the
// mode space R^n x Z^d, theta(l,k) = sum_ij theta_ij l_i k_j.
struct DeformationParams {
  double hbar = 0.0;
  RMat theta;  // (n+d) x (n+d), exactly skew-symmetric
  int n = 0, d = 0;

  void validate() const {
    const int m = n + d;
    if (theta.rows() != m || theta.cols() != m)
      throw std::invalid_argument("deformation.theta: wrong shape");
    if ((theta + theta.transpose()).cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("deformation.theta: not exactly skew-symmetric");
    for (int i = 0; i < m; ++i)
      if (theta(i, i) != 0.0) throw std::invalid_argument("deformation.theta: nonzero diagonal");
  }

  double bilinear(const std::vector<double>& l, const std::vector<double>& k) const {
    double s = 0.0;
    const int m = n + d;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += theta(i, j) * l[size_t(i)] * k[size_t(j)];
    return s;
  }

  static DeformationParams zero(int n, int d, double hbar = 0.0) {
    DeformationParams p;
    p.n = n; p.d = d; p.hbar = hbar;
    p.theta = RMat::Zero(n + d, n + d);
    return p;
  }

  // Skew form pairing each R direction with its torus partner on the n = d
  // cylinder, with the 1/(2 pi) normalization:
  //   theta(l, k) = (1/2pi) sum_i (x_k_i n_l_i - n_k_i x_l_i).
  static DeformationParams cylinder_canonical(int d, double hbar) {
    DeformationParams p;
    p.n = d; p.d = d; p.hbar = hbar;
    p.theta = RMat::Zero(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
      p.theta(d + i, i) = 1.0 / (2 * pi);   // n_l * x_k
      p.theta(i, d + i) = -1.0 / (2 * pi);  // -x_l * n_k
    }
    return p;
  }

  // Skew form on R^{2nu} = {(p,q)} that phase-matches the two-block plane
  // kernel: theta((p',q'),(p,q)) = -(q'.p - p'.q)/(2 pi).
  static DeformationParams moyal_matched(int nu, double hbar) {
    DeformationParams p;
    p.n = 2 * nu; p.d = 0; p.hbar = hbar;
    p.theta = RMat::Zero(2 * nu, 2 * nu);
    for (int i = 0; i < nu; ++i) {
      p.theta(nu + i, i) = -1.0 / (2 * pi);  // q'_i p_i
      p.theta(i, nu + i) = 1.0 / (2 * pi);   // -(-p'_i q_i)
    }
    return p;
  }
};

// sigma_hbar(l,k) = exp(2 pi i hbar theta(l,k)); unit modulus.
inline cplx bicharacter(const DeformationParams& p, const std::vector<double>& l,
                        const std::vector<double>& k) {
  return unit_phase(2 * pi * p.hbar * p.bilinear(l, k));
}

}  // namespace starcyl
