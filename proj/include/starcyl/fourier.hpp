#pragma once

#include "starcyl/grid_function.hpp"

namespace starcyl {

namespace detail {

// Contract matrix M (rows: new extent, cols: old extent) along one axis of a
// row-major tensor with the given per-axis extents.
inline Vec apply_along_axis(const Vec& data, const std::vector<std::int64_t>& extents, int axis,
                            const Mat& M) {
  const int m = int(extents.size());
  std::int64_t pre = 1, post = 1;
  for (int i = 0; i < axis; ++i) pre *= extents[size_t(i)];
  for (int i = axis + 1; i < m; ++i) post *= extents[size_t(i)];
  const std::int64_t oldn = extents[size_t(axis)], newn = M.rows();
  Vec out(pre * newn * post);
  for (std::int64_t p = 0; p < pre; ++p) {
    // slice as (oldn x post) matrix, contiguous in post
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> in(
        data.data() + p * oldn * post, oldn, post);
    Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> dst(
        out.data() + p * newn * post, newn, post);
    dst = M * in;
  }
  return out;
}

// Forward DFT matrix for one direction: rows are modes, cols grid points,
// entry = step * exp(-2 pi i k x_j). Quadrature of Eq-style transform.
inline Mat forward_matrix(const Geometry& g, int dir, int cutoff) {
  const int gp = g.grid_pts;
  Mat M(2 * cutoff + 1, gp);
  const double step = g.is_torus_dir(dir) ? 1.0 / gp : g.L / gp;
  for (int j = -cutoff; j <= cutoff; ++j) {
    const double k = j * g.mode_step(dir);
    for (int ix = 0; ix < gp; ++ix)
      M(j + cutoff, ix) = step * unit_phase(-2 * pi * k * g.position(dir, ix));
  }
  return M;
}

inline Mat inverse_matrix(const Geometry& g, int dir, int cutoff) {
  const int gp = g.grid_pts;
  Mat M(gp, 2 * cutoff + 1);
  const double w = g.is_torus_dir(dir) ? 1.0 : g.dk();  // mu weight per mode
  for (int ix = 0; ix < gp; ++ix)
    for (int j = -cutoff; j <= cutoff; ++j) {
      const double k = j * g.mode_step(dir);
      M(ix, j + cutoff) = w * unit_phase(2 * pi * k * g.position(dir, ix));
    }
  return M;
}

}  // namespace detail

// fhat(k) = int dlambda(x) exp(-2 pi i k.x) f(x), by grid quadrature.
// Exact (to roundoff) for band-limited f within the stored box.
inline FourierFunction forward_transform(const GridFunction& f) {
  f.check();
  const Geometry& g = f.geometry;
  FourierFunction out = FourierFunction::zero(g);
  std::vector<std::int64_t> ext(size_t(g.dim()), g.grid_pts);
  Vec cur = f.samples;
  for (int dir = 0; dir < g.dim(); ++dir) {
    cur = detail::apply_along_axis(cur, ext, dir, detail::forward_matrix(g, dir, g.cutoff()));
    ext[size_t(dir)] = 2 * g.cutoff() + 1;
  }
  out.coeffs = cur;
  return out;
}

// f(x) = int dmu(k) exp(2 pi i k.x) fhat(k); inverse of the above on the box.
inline GridFunction inverse_transform(const FourierFunction& phi) {
  phi.check();
  const Geometry& g = phi.geometry;
  std::vector<std::int64_t> ext(size_t(g.dim()));
  for (int i = 0; i < g.dim(); ++i) ext[size_t(i)] = 2 * phi.box.cutoffs[size_t(i)] + 1;
  Vec cur = phi.coeffs;
  for (int dir = 0; dir < g.dim(); ++dir) {
    cur = detail::apply_along_axis(cur, ext, dir,
                                   detail::inverse_matrix(g, dir, phi.box.cutoffs[size_t(dir)]));
    ext[size_t(dir)] = g.grid_pts;
  }
  GridFunction out{g, cur};
  return out;
}

// Function on (R-mode lattice) x (torus position grid): the torus directions
// of phi are summed against exp(2 pi i n.t) while R directions stay in their
// Fourier variable.
struct PartialFunction {
  Geometry geometry;
  std::vector<int> mode_cutoffs;  // R directions only
  int t_pts = 0;                  // torus grid points per direction
  Vec values;                     // row-major: R-mode box, then torus grid

  std::int64_t x_size() const {
    std::int64_t s = 1;
    for (int k : mode_cutoffs) s *= 2 * k + 1;
    return s;
  }
  std::int64_t t_size() const {
    std::int64_t s = 1;
    for (int i = 0; i < geometry.d; ++i) s *= t_pts;
    return s;
  }
};

// phi_acute(x, t) = sum_n phi(x, n) exp(2 pi i n.t), unit-period convention.
inline PartialFunction partial_fourier(const FourierFunction& phi) {
  phi.check();
  const Geometry& g = phi.geometry;
  if (g.d < 1) throw std::invalid_argument("partial_fourier: geometry has d = 0");
  PartialFunction out;
  out.geometry = g;
  out.t_pts = g.grid_pts;
  out.mode_cutoffs.assign(phi.box.cutoffs.begin(), phi.box.cutoffs.begin() + g.n);
  std::vector<std::int64_t> ext(size_t(g.dim()));
  for (int i = 0; i < g.dim(); ++i) ext[size_t(i)] = 2 * phi.box.cutoffs[size_t(i)] + 1;
  Vec cur = phi.coeffs;
  for (int dir = g.n; dir < g.dim(); ++dir) {
    const int K = phi.box.cutoffs[size_t(dir)];
    Mat M(g.grid_pts, 2 * K + 1);
    for (int it = 0; it < g.grid_pts; ++it)
      for (int j = -K; j <= K; ++j) M(it, j + K) = unit_phase(2 * pi * j * double(it) / g.grid_pts);
    cur = detail::apply_along_axis(cur, ext, dir, M);
    ext[size_t(dir)] = g.grid_pts;
  }
  out.values = cur;
  return out;
}

}  // namespace starcyl
