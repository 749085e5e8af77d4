#pragma once

#include "starcyl/geometry.hpp"

namespace starcyl {

enum class NormKind { L1, L2, sup };

// Samples over the position grid [-L/2,L/2)^n x [0,1)^d, row-major.
struct GridFunction {
  Geometry geometry;
  Vec samples;

  static GridFunction zero(const Geometry& g) {
    g.validate();
    std::int64_t sz = 1;
    for (int i = 0; i < g.dim(); ++i) sz *= g.grid_pts;
    GridFunction f{g, Vec::Zero(sz)};
    return f;
  }

  std::int64_t grid_size() const { return samples.size(); }

  void check() const {
    std::int64_t sz = 1;
    for (int i = 0; i < geometry.dim(); ++i) sz *= geometry.grid_pts;
    if (samples.size() != sz) throw std::invalid_argument("grid function: shape mismatch");
    if (!samples.allFinite()) throw std::invalid_argument("grid function: non-finite entries");
  }

  template <class F>
  static GridFunction sample(const Geometry& g, F&& fn) {
    GridFunction out = zero(g);
    const int m = g.dim();
    std::vector<int> idx(size_t(m), 0);
    std::vector<double> x(size_t(m), {});
    for (std::int64_t flat = 0; flat < out.samples.size(); ++flat) {
      std::int64_t rest = flat;
      for (int i = m - 1; i >= 0; --i) {
        idx[size_t(i)] = int(rest % g.grid_pts);
        rest /= g.grid_pts;
      }
      for (int i = 0; i < m; ++i) x[size_t(i)] = g.position(i, idx[size_t(i)]);
      out.samples[flat] = fn(x);
    }
    return out;
  }
};

// Fourier coefficients over the truncated mode box. For R directions the mode
// set is {j/L : |j| <= K}; for torus directions {-K..K} in Z. Coefficients
// outside the box are identically zero and not stored.
struct FourierFunction {
  Geometry geometry;
  ModeBox box;
  Vec coeffs;

  static FourierFunction zero(const Geometry& g) {
    g.validate();
    ModeBox b = default_box(g);
    return FourierFunction{g, b, Vec::Zero(b.size())};
  }

  double mu_weight() const { return geometry.mu_weight(); }

  cplx at(const std::vector<int>& m) const {
    return box.contains(m) ? coeffs[box.index(m)] : cplx{0, 0};
  }
  void set(const std::vector<int>& m, cplx v) {
    if (!box.contains(m)) throw std::invalid_argument("mode outside box");
    coeffs[box.index(m)] = v;
  }
  void check() const {
    if (coeffs.size() != box.size()) throw std::invalid_argument("fourier function: shape mismatch");
    if (!coeffs.allFinite()) throw std::invalid_argument("fourier function: non-finite entries");
  }
};

inline double norm(const FourierFunction& phi, NormKind kind) {
  const double w = phi.mu_weight();
  switch (kind) {
    case NormKind::L1: return w * phi.coeffs.cwiseAbs().sum();
    case NormKind::L2: return std::sqrt(w * phi.coeffs.cwiseAbs2().sum());
    case NormKind::sup: return phi.coeffs.size() ? phi.coeffs.cwiseAbs().maxCoeff() : 0.0;
  }
  return 0.0;
}

inline double norm(const GridFunction& f, NormKind kind) {
  const double v = f.geometry.cell_volume();
  switch (kind) {
    case NormKind::L1: return v * f.samples.cwiseAbs().sum();
    case NormKind::L2: return std::sqrt(v * f.samples.cwiseAbs2().sum());
    case NormKind::sup: return f.samples.size() ? f.samples.cwiseAbs().maxCoeff() : 0.0;
  }
  return 0.0;
}

}  // namespace starcyl
