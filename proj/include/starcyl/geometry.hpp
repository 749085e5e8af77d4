#pragma once

#include <array>
#include <numeric>

#include "starcyl/numeric.hpp"

namespace starcyl {

enum class Signature { euclidean, lorentzian };

// Truncated model of R^n x T^d. R directions are compactified to circles of
// circumference L carrying compactly supported test functions; their Fourier
// duals become lattices with spacing 1/L. Torus directions have unit period.
// One global convention: unit period, factor 2*pi inside all transform phases.
struct Geometry {
  int n = 0;          // noncompact directions (compactified to length L)
  int d = 0;          // torus directions
  double L = 16.0;    // box length per R direction
  int grid_pts = 256; // position samples per direction
  Signature signature = Signature::euclidean;

  int dim() const { return n + d; }
  double dk() const { return 1.0 / L; }
  // Largest stored integer mode per direction. grid_pts/2 - 1 keeps the mode
  // set symmetric and free of the aliased Nyquist pair.
  int cutoff() const { return grid_pts / 2 - 1; }
  bool is_torus_dir(int i) const { return i >= n; }
  double mode_step(int i) const { return is_torus_dir(i) ? 1.0 : dk(); }
  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= L / grid_pts;
    for (int i = 0; i < d; ++i) v *= 1.0 / grid_pts;
    return v;
  }
  // Discretized measure mu on the mode lattice: (dk)^n, counting on Z^d.
  double mu_weight() const {
    double w = 1.0;
    for (int i = 0; i < n; ++i) w *= dk();
    return w;
  }
  double position(int dir, int idx) const {
    if (is_torus_dir(dir)) return double(idx) / grid_pts;
    return -L / 2 + double(idx) * L / grid_pts;
  }

  void validate() const {
    if (n < 0 || d < 0 || n + d < 1)
      throw std::invalid_argument("geometry.n/geometry.d: total dimension must be >= 1");
    if (L <= 0) throw std::invalid_argument("geometry.L: must be > 0");
    if (grid_pts < 4 || grid_pts % 2 != 0)
      throw std::invalid_argument("geometry.grid_pts: must be even and >= 4");
  }
};

// Dense multi-index over a symmetric mode box {-K..K}^m (per-direction K).
struct ModeBox {
  std::vector<int> cutoffs;  // per direction
  int dims() const { return int(cutoffs.size()); }
  std::int64_t size() const {
    std::int64_t s = 1;
    for (int k : cutoffs) s *= (2 * k + 1);
    return s;
  }
  std::int64_t index(const std::vector<int>& m) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dims(); ++i) idx = idx * (2 * cutoffs[i] + 1) + (m[i] + cutoffs[i]);
    return idx;
  }
  bool contains(const std::vector<int>& m) const {
    for (int i = 0; i < dims(); ++i)
      if (m[i] < -cutoffs[i] || m[i] > cutoffs[i]) return false;
    return true;
  }
  std::vector<int> unindex(std::int64_t idx) const {
    std::vector<int> m(dims());
    for (int i = dims() - 1; i >= 0; --i) {
      const int w = 2 * cutoffs[i] + 1;
      m[i] = int(idx % w) - cutoffs[i];
      idx /= w;
    }
    return m;
  }
};

inline ModeBox default_box(const Geometry& g) {
  return ModeBox{std::vector<int>(size_t(g.dim()), g.cutoff())};
}

// Physical frequency of an integer mode vector.
inline std::vector<double> mode_frequency(const Geometry& g, const std::vector<int>& m) {
  std::vector<double> k(size_t(g.dim()));
  for (int i = 0; i < g.dim(); ++i) k[size_t(i)] = m[size_t(i)] * g.mode_step(i);
  return k;
}

}  // namespace starcyl
