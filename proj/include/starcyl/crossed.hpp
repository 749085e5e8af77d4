#pragma once

#include "starcyl/star_product.hpp"

namespace starcyl {

// beta_x(t) = t + hbar x, componentwise mod 1 (unit period).
inline std::vector<double> beta_action(const std::vector<double>& x, const std::vector<double>& t,
                                       double hbar) {
  if (x.size() != t.size()) throw std::invalid_argument("beta_action: dimension mismatch");
  std::vector<double> out(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    double v = std::fmod(t[i] + hbar * x[i], 1.0);
    if (v < 0) v += 1.0;
    out[i] = v;
  }
  return out;
}

namespace detail {

// Torus-mode representation of a PartialFunction: rows = R-mode flat index,
// cols = torus mode flat index over the box {-(t_pts/2-1)..}^d.
struct TModes {
  ModeBox xbox, tbox;
  int t_pts = 0;
  Mat m;  // x_size x tmodes
};

inline TModes to_tmodes(const PartialFunction& f) {
  const Geometry& g = f.geometry;
  TModes tm;
  tm.xbox = ModeBox{f.mode_cutoffs};
  tm.tbox = ModeBox{std::vector<int>(size_t(g.d), f.t_pts / 2 - 1)};
  tm.t_pts = f.t_pts;
  const std::int64_t nx = tm.xbox.size(), ntm = tm.tbox.size(), ntg = f.t_size();
  // DFT per torus direction; small sizes, direct matrix
  Mat F = Mat::Identity(1, 1);
  Mat dir(tm.tbox.cutoffs.empty() ? 0 : 2 * tm.tbox.cutoffs[0] + 1, f.t_pts);
  // build full (ntm x ntg) transform as Kronecker of per-direction DFTs
  std::vector<Mat> dfts;
  for (int i = 0; i < g.d; ++i) {
    const int K = tm.tbox.cutoffs[size_t(i)];
    Mat D(2 * K + 1, f.t_pts);
    for (int j = -K; j <= K; ++j)
      for (int it = 0; it < f.t_pts; ++it)
        D(j + K, it) = unit_phase(-2 * pi * j * double(it) / f.t_pts) / double(f.t_pts);
    dfts.push_back(std::move(D));
  }
  Mat full = Mat::Ones(1, 1);
  for (auto& D : dfts) {
    Mat next(full.rows() * D.rows(), full.cols() * D.cols());
    for (Eigen::Index a = 0; a < full.rows(); ++a)
      for (Eigen::Index b = 0; b < full.cols(); ++b)
        next.block(a * D.rows(), b * D.cols(), D.rows(), D.cols()) = full(a, b) * D;
    full = std::move(next);
  }
  tm.m.resize(nx, ntm);
  for (std::int64_t ix = 0; ix < nx; ++ix) {
    Eigen::Map<const Vec> row(f.values.data() + ix * ntg, ntg);
    tm.m.row(ix) = (full * row).transpose();
  }
  return tm;
}

inline PartialFunction from_tmodes(const Geometry& g, const TModes& tm) {
  PartialFunction out;
  out.geometry = g;
  out.mode_cutoffs = tm.xbox.cutoffs;
  out.t_pts = tm.t_pts;
  const std::int64_t nx = tm.xbox.size(), ntm = tm.tbox.size();
  std::int64_t ntg = 1;
  for (int i = 0; i < g.d; ++i) ntg *= tm.t_pts;
  std::vector<Mat> idfts;
  for (int i = 0; i < g.d; ++i) {
    const int K = tm.tbox.cutoffs[size_t(i)];
    Mat D(tm.t_pts, 2 * K + 1);
    for (int it = 0; it < tm.t_pts; ++it)
      for (int j = -K; j <= K; ++j) D(it, j + K) = unit_phase(2 * pi * j * double(it) / tm.t_pts);
    idfts.push_back(std::move(D));
  }
  Mat full = Mat::Ones(1, 1);
  for (auto& D : idfts) {
    Mat next(full.rows() * D.rows(), full.cols() * D.cols());
    for (Eigen::Index a = 0; a < full.rows(); ++a)
      for (Eigen::Index b = 0; b < full.cols(); ++b)
        next.block(a * D.rows(), b * D.cols(), D.rows(), D.cols()) = full(a, b) * D;
    full = std::move(next);
  }
  out.values.resize(nx * ntg);
  for (std::int64_t ix = 0; ix < nx; ++ix)
    Eigen::Map<Vec>(out.values.data() + ix * ntg, ntg) = full * tm.m.row(ix).transpose();
  return out;
}

// Phase vector implementing an exact band-limited shift t -> t + s.
inline Vec shift_phases(const ModeBox& tbox, const std::vector<double>& s) {
  Vec ph(tbox.size());
  for (std::int64_t i = 0; i < tbox.size(); ++i) {
    const auto mi = tbox.unindex(i);
    double arg = 0;
    for (size_t j = 0; j < s.size(); ++j) arg += 2 * pi * mi[j] * s[j];
    ph[i] = unit_phase(arg);
  }
  return ph;
}

// Pointwise product of two t-band-limited rows, returned in t-modes.
// Exact if the summed bands stay within the box (margin rule).
inline Vec tmode_product(const ModeBox& tbox, const Vec& a, const Vec& b) {
  Vec out = Vec::Zero(tbox.size());
  const int dd = tbox.dims();
  for (std::int64_t i = 0; i < tbox.size(); ++i) {
    if (a[i] == cplx{0, 0}) continue;
    const auto mi = tbox.unindex(i);
    for (std::int64_t j = 0; j < tbox.size(); ++j) {
      if (b[j] == cplx{0, 0}) continue;
      auto mj = tbox.unindex(j);
      bool ok = true;
      for (int q = 0; q < dd; ++q) {
        mj[size_t(q)] += mi[size_t(q)];
        if (mj[size_t(q)] < -tbox.cutoffs[size_t(q)] || mj[size_t(q)] > tbox.cutoffs[size_t(q)]) {
          ok = false;
          break;
        }
      }
      if (ok) out[tbox.index(mj)] += a[i] * b[j];
    }
  }
  return out;
}

inline void require_match(const PartialFunction& a, const PartialFunction& b) {
  if (a.mode_cutoffs != b.mode_cutoffs || a.t_pts != b.t_pts || a.geometry.n != b.geometry.n ||
      a.geometry.d != b.geometry.d || a.geometry.L != b.geometry.L)
    throw std::invalid_argument("geometry mismatch");
  if (a.geometry.n != a.geometry.d) throw std::invalid_argument("crossed product needs n = d");
}

// Shared kernel for the two crossed-product style integrals:
//   out(x,t) = int dy A(y, t + hbar*sa(y,x)) B(x-y, t + hbar*sb(y,x)).
template <class ShiftA, class ShiftB>
inline PartialFunction crossed_kernel(const PartialFunction& A, const PartialFunction& B,
                                      ShiftA&& sa, ShiftB&& sb) {
  require_match(A, B);
  const Geometry& g = A.geometry;
  const TModes ta = to_tmodes(A), tb = to_tmodes(B);
  const ModeBox& xbox = ta.xbox;
  const std::int64_t nx = xbox.size();
  const double dy = std::pow(g.dk(), g.d);
  TModes to = ta;
  to.m.setZero();
  const int dd = g.d;
  parallel_for(nx, [&](std::int64_t ixo) {
    const auto xm = xbox.unindex(ixo);
    std::vector<double> xv(size_t(dd), {});
    for (int i = 0; i < dd; ++i) xv[size_t(i)] = xm[size_t(i)] * g.dk();
    Vec acc = Vec::Zero(ta.tbox.size());
    for (std::int64_t iy = 0; iy < nx; ++iy) {
      const auto ym = xbox.unindex(iy);
      std::vector<int> diff(size_t(dd), {});
      bool inside = true;
      for (int i = 0; i < dd; ++i) {
        diff[size_t(i)] = xm[size_t(i)] - ym[size_t(i)];
        if (diff[size_t(i)] < -xbox.cutoffs[size_t(i)] || diff[size_t(i)] > xbox.cutoffs[size_t(i)])
          inside = false;
      }
      if (!inside) continue;
      std::vector<double> yv(size_t(dd), {});
      for (int i = 0; i < dd; ++i) yv[size_t(i)] = ym[size_t(i)] * g.dk();
      const Vec rowA =
          ta.m.row(iy).transpose().cwiseProduct(shift_phases(ta.tbox, sa(yv, xv)));
      const Vec rowB =
          tb.m.row(xbox.index(diff)).transpose().cwiseProduct(shift_phases(tb.tbox, sb(yv, xv)));
      acc += tmode_product(ta.tbox, rowA, rowB);
    }
    to.m.row(ixo) = (dy * acc).transpose();
  });
  return from_tmodes(g, to);
}

}  // namespace detail

// (phi * psi)(x,t) = int dy phi(y, beta_{y-x}(t)) psi(x-y, beta_y(t)).
// Torus shifts are evaluated by trigonometric interpolation (exact on
// band-limited t-dependence).
inline PartialFunction star_partial(const PartialFunction& phi, const PartialFunction& psi,
                                    double hbar) {
  return detail::crossed_kernel(
      phi, psi,
      [hbar](const std::vector<double>& y, const std::vector<double>& x) {
        std::vector<double> s(y.size());
        for (size_t i = 0; i < y.size(); ++i) s[i] = hbar * (y[i] - x[i]);
        return s;
      },
      [hbar](const std::vector<double>& y, const std::vector<double>&) {
        std::vector<double> s(y.size());
        for (size_t i = 0; i < y.size(); ++i) s[i] = hbar * y[i];
        return s;
      });
}

enum class QDirection { forward, inverse };

// Q(phi)(x,t) = phi(x, beta_x(t)); inverse composes with beta_{-x}.
inline PartialFunction q_map(const PartialFunction& phi, double hbar, QDirection dir) {
  const Geometry& g = phi.geometry;
  detail::TModes tm = detail::to_tmodes(phi);
  const double sgn = (dir == QDirection::forward) ? 1.0 : -1.0;
  for (std::int64_t ix = 0; ix < tm.xbox.size(); ++ix) {
    const auto xm = tm.xbox.unindex(ix);
    std::vector<double> s(size_t(g.d));
    for (int i = 0; i < g.d; ++i) s[size_t(i)] = sgn * hbar * xm[size_t(i)] * g.dk();
    tm.m.row(ix) = tm.m.row(ix).cwiseProduct(detail::shift_phases(tm.tbox, s).transpose());
  }
  return detail::from_tmodes(g, tm);
}

// Crossed-product convolution for the action beta_{2x}:
//   (A * B)(x,t) = int dy A(y,t) B(x-y, beta_{2y}(t)).
inline PartialFunction crossed_convolution(const PartialFunction& A, const PartialFunction& B,
                                           double hbar) {
  return detail::crossed_kernel(
      A, B,
      [](const std::vector<double>& y, const std::vector<double>&) {
        return std::vector<double>(y.size(), 0.0);
      },
      [hbar](const std::vector<double>& y, const std::vector<double>&) {
        std::vector<double> s(y.size());
        for (size_t i = 0; i < y.size(); ++i) s[i] = 2 * hbar * y[i];
        return s;
      });
}

inline double sup_diff(const PartialFunction& a, const PartialFunction& b) {
  return (a.values - b.values).cwiseAbs().maxCoeff();
}
inline double sup_norm(const PartialFunction& a) { return a.values.cwiseAbs().maxCoeff(); }

}  // namespace starcyl
