#pragma once

#include <random>

#include "starcyl/fourier.hpp"

namespace starcyl::testing {

inline Geometry cylinder(double L = 8.0, int gp = 16) {
  Geometry g;
  g.n = 1; g.d = 1; g.L = L; g.grid_pts = gp;
  return g;
}

inline Geometry torus(int d = 1, int gp = 16) {
  Geometry g;
  g.n = 0; g.d = d; g.grid_pts = gp;
  return g;
}

// Random coefficients supported on |m_i| <= band (well inside the box when
// band <= cutoff/2, so products stay exact).
inline FourierFunction random_support(const Geometry& g, int band, std::mt19937_64& rng) {
  FourierFunction phi = FourierFunction::zero(g);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::int64_t nm = phi.box.size();
  for (std::int64_t i = 0; i < nm; ++i) {
    const auto m = phi.box.unindex(i);
    bool in = true;
    for (int j = 0; j < g.dim(); ++j)
      if (std::abs(m[size_t(j)]) > band) in = false;
    if (in) phi.coeffs[i] = cplx(u(rng), u(rng));
  }
  return phi;
}

inline FourierFunction delta_at(const Geometry& g, const std::vector<int>& m, cplx v = {1, 0}) {
  FourierFunction phi = FourierFunction::zero(g);
  phi.set(m, v);
  return phi;
}

inline double max_diff(const FourierFunction& a, const FourierFunction& b) {
  return (a.coeffs - b.coeffs).cwiseAbs().maxCoeff();
}

}  // namespace starcyl::testing
