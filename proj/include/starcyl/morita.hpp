#pragma once

#include <Eigen/SVD>

#include "starcyl/numeric.hpp"

namespace starcyl {

// Appendix-style bimodule data: rapidly decaying functions on a length-L box
// grid, sequences on a truncated integer lattice, and functions on the
// (box) x (unit torus) grid. Integer shifts must land on lattice points, so
// L is an integer and the torus grid reuses the box spacing delta = L/gp
// (gp/L points per unit period).

struct LineFunction {
  double L = 8;
  int gp = 256;
  Vec samples;  // x_i = -L/2 + i*delta

  double delta() const { return L / gp; }
  int per_unit() const { return gp / int(L); }
  double position(int i) const { return -L / 2 + i * delta(); }

  void validate() const {
    if (L < 2 || L != std::floor(L)) throw std::invalid_argument("line: L must be an integer >= 2");
    if (gp % int(L) != 0) throw std::invalid_argument("line: grid must resolve integer shifts");
    if (samples.size() != gp) throw std::invalid_argument("line: sample count");
    if (!samples.allFinite()) throw std::invalid_argument("line: non-finite samples");
  }
  // mass outside [-L/4, L/4], relative to the total
  double decay_defect() const {
    double in = 0, out = 0;
    for (int i = 0; i < gp; ++i) {
      const double x = position(i);
      (std::abs(x) <= L / 4 ? in : out) += std::abs(samples[i]);
    }
    return out / std::max(in + out, 1e-300);
  }
  void require_decay() const {
    validate();
    if (decay_defect() > 1e-10) throw std::invalid_argument("line: decay certificate fails");
  }

  template <class Fn>
  static LineFunction sample(double L, int gp, Fn&& fn) {
    LineFunction f;
    f.L = L;
    f.gp = gp;
    f.samples.resize(gp);
    for (int i = 0; i < gp; ++i) f.samples[i] = fn(f.position(i));
    return f;
  }
};

struct SequenceFunction {
  int cutoff = 8;  // values on -cutoff..cutoff
  Vec values;

  cplx at(int n) const {
    return (std::abs(n) <= cutoff) ? values[n + cutoff] : cplx{0, 0};
  }
  void set(int n, cplx v) { values[n + cutoff] = v; }
  static SequenceFunction zero(int cutoff) {
    return SequenceFunction{cutoff, Vec::Zero(2 * cutoff + 1)};
  }
  void require_tail() const {
    if (values.size() != 2 * cutoff + 1) throw std::invalid_argument("sequence: size");
    const double top = values.cwiseAbs().maxCoeff();
    if (top > 0 && std::max(std::abs(values[0]), std::abs(values[2 * cutoff])) > 1e-10 * top)
      throw std::invalid_argument("sequence: tail above tolerance at the cutoff");
  }
};

struct CylFunction {
  double L = 8;
  int gpx = 256;
  Vec samples;  // row-major (x index, t index), t grid has gp/L points

  int gpt() const { return gpx / int(L); }
  double delta() const { return L / gpx; }
  cplx at(int ix, int it) const {
    const int nt = gpt();
    return samples[ix * nt + ((it % nt) + nt) % nt];
  }
  void validate() const {
    if (L < 2 || L != std::floor(L)) throw std::invalid_argument("cyl: L must be an integer >= 2");
    if (gpx % int(L) != 0) throw std::invalid_argument("cyl: grid must resolve integer shifts");
    if (samples.size() != std::int64_t(gpx) * gpt())
      throw std::invalid_argument("cyl: sample count");
    if (!samples.allFinite()) throw std::invalid_argument("cyl: non-finite samples");
  }
  double decay_defect() const {
    double in = 0, out = 0;
    const int nt = gpt();
    for (int ix = 0; ix < gpx; ++ix) {
      const double x = -L / 2 + ix * delta();
      for (int it = 0; it < nt; ++it)
        (std::abs(x) <= L / 4 ? in : out) += std::abs(samples[ix * nt + it]);
    }
    return out / std::max(in + out, 1e-300);
  }
  void require_decay() const {
    validate();
    if (decay_defect() > 1e-10) throw std::invalid_argument("cyl: decay certificate fails");
  }

  template <class Fn>
  static CylFunction sample(double L, int gpx, Fn&& fn) {  // fn(x, t)
    CylFunction f;
    f.L = L;
    f.gpx = gpx;
    const int nt = f.gpt();
    f.samples.resize(std::int64_t(gpx) * nt);
    for (int ix = 0; ix < gpx; ++ix)
      for (int it = 0; it < nt; ++it)
        f.samples[ix * nt + it] = fn(-L / 2 + ix * f.delta(), double(it) / nt);
    return f;
  }
};

inline double l1(const LineFunction& f) { return f.delta() * f.samples.cwiseAbs().sum(); }
inline double l1(const CylFunction& f) {
  return f.delta() * (1.0 / f.gpt()) * f.samples.cwiseAbs().sum();
}
inline double l1(const SequenceFunction& a) { return a.values.cwiseAbs().sum(); }

namespace detail {
inline void require_match(const CylFunction& a, const CylFunction& b) {
  if (a.L != b.L || a.gpx != b.gpx) throw std::invalid_argument("cyl: grid mismatch");
}
inline void require_match(const LineFunction& a, const LineFunction& b) {
  if (a.L != b.L || a.gp != b.gp) throw std::invalid_argument("line: grid mismatch");
}
}  // namespace detail

// (F * G)(x,t) = int dy F(y,t) G(x-y, t - y mod 1); the t shift lands on the
// torus grid because both grids share the spacing delta.
inline CylFunction appendix_product(const CylFunction& F, const CylFunction& G) {
  detail::require_match(F, G);
  F.require_decay();
  G.require_decay();
  CylFunction out = F;
  out.samples.setZero();
  const int nt = F.gpt(), gp = F.gpx;
  parallel_for(gp, [&](std::int64_t ix) {
    for (int it = 0; it < nt; ++it) {
      cplx acc{0, 0};
      for (int iy = 0; iy < gp; ++iy) {
        const int id = int(ix) - iy + gp / 2;  // index of x - y
        if (id < 0 || id >= gp) continue;
        // pi(y) on the torus grid: y = -L/2 + iy*delta, y/delta = iy - gp/2
        const int shift = iy - gp / 2;
        const int jt = (((it - shift) % nt) + nt) % nt;
        acc += F.samples[iy * nt + it] * G.samples[std::int64_t(id) * nt + jt];
      }
      out.samples[ix * nt + it] = F.delta() * acc;
    }
  });
  return out;
}

enum class ActionKind { C_on_left, Z_on_right, Z_on_left, C_on_right };

// The four module actions:
//   (F.f)(x) = int dy F(x-y, pi(x)) f(y)        (C_on_left)
//   (f.a)(x) = sum_n a(n) f(x+n)                (Z_on_right)
//   (a.f)(x) = sum_n a(n) f(x-n)                (Z_on_left)
//   (f.F)(x) = int dy F(y-x, pi(y)) f(y)        (C_on_right)
inline LineFunction module_action(ActionKind kind, const CylFunction& F, const SequenceFunction& a,
                                  const LineFunction& f) {
  f.require_decay();
  LineFunction out = f;
  out.samples.setZero();
  const int gp = f.gp, ppu = f.per_unit();

  if (kind == ActionKind::Z_on_right || kind == ActionKind::Z_on_left) {
    a.require_tail();
    if (a.cutoff > int(f.L) / 4)
      throw std::invalid_argument("module_action: integer shifts exceed the safe box");
    const int sgn = (kind == ActionKind::Z_on_right) ? +1 : -1;
    for (int ix = 0; ix < gp; ++ix) {
      cplx acc{0, 0};
      for (int n = -a.cutoff; n <= a.cutoff; ++n) {
        const int j = ix + sgn * n * ppu;
        if (j < 0 || j >= gp) continue;
        acc += a.at(n) * f.samples[j];
      }
      out.samples[ix] = acc;
    }
    return out;
  }

  F.require_decay();
  if (F.gpx != gp || F.L != f.L) throw std::invalid_argument("module_action: grid mismatch");
  const int nt = F.gpt();
  if (kind == ActionKind::C_on_left) {
    parallel_for(gp, [&](std::int64_t ix) {
      // pi(x) index on the torus grid
      const int tx = ((int(ix) - gp / 2) % nt + nt) % nt;
      cplx acc{0, 0};
      for (int iy = 0; iy < gp; ++iy) {
        const int id = int(ix) - iy + gp / 2;
        if (id < 0 || id >= gp) continue;
        acc += F.samples[std::int64_t(id) * nt + tx] * f.samples[iy];
      }
      out.samples[ix] = f.delta() * acc;
    });
    return out;
  }
  // C_on_right
  parallel_for(gp, [&](std::int64_t ix) {
    cplx acc{0, 0};
    for (int iy = 0; iy < gp; ++iy) {
      const int id = iy - int(ix) + gp / 2;  // index of y - x
      if (id < 0 || id >= gp) continue;
      const int ty = ((iy - gp / 2) % nt + nt) % nt;  // pi(y)
      acc += F.samples[std::int64_t(id) * nt + ty] * f.samples[iy];
    }
    out.samples[ix] = f.delta() * acc;
  });
  return out;
}

// phi~(f,g)(x,t) = sum_n f(t-n) g(t-x-n): the torus argument is lifted to the
// line through the lattice sum.
inline CylFunction pairing_phi(const LineFunction& f, const LineFunction& g) {
  detail::require_match(f, g);
  f.require_decay();
  g.require_decay();
  CylFunction out;
  out.L = f.L;
  out.gpx = f.gp;
  const int nt = out.gpt(), gp = f.gp, ppu = f.per_unit();
  out.samples = Vec::Zero(std::int64_t(gp) * nt);
  const int nmax = int(f.L) / 2 + 1;
  for (int ix = 0; ix < gp; ++ix) {
    for (int it = 0; it < nt; ++it) {
      cplx acc{0, 0};
      for (int n = -nmax; n <= nmax; ++n) {
        // f(t - n): index of (t - n) on the line grid
        const int jf = it - n * ppu + gp / 2;
        if (jf < 0 || jf >= gp) continue;
        // g(t - x - n): t - x in delta units = it - (ix - gp/2)
        const int jg = it - (ix - gp / 2) - n * ppu + gp / 2;
        if (jg < 0 || jg >= gp) continue;
        acc += f.samples[jf] * g.samples[jg];
      }
      out.samples[std::int64_t(ix) * nt + it] = acc;
    }
  }
  return out;
}

// psi~(f,g)(n) = int dx f(x) g(x-n).
inline SequenceFunction pairing_psi(const LineFunction& f, const LineFunction& g, int cutoff) {
  detail::require_match(f, g);
  f.require_decay();
  g.require_decay();
  SequenceFunction out = SequenceFunction::zero(cutoff);
  const int gp = f.gp, ppu = f.per_unit();
  for (int n = -cutoff; n <= cutoff; ++n) {
    cplx acc{0, 0};
    for (int ix = 0; ix < gp; ++ix) {
      const int j = ix - n * ppu;
      if (j < 0 || j >= gp) continue;
      acc += f.samples[ix] * g.samples[j];
    }
    out.set(n, f.delta() * acc);
  }
  return out;
}

// e_lambda(x, t) = sqrt(lambda/pi) exp(-lambda x^2): the t-independent
// approximate identity, normalized to unit x-integral.
inline CylFunction approximate_identity(double lambda, double L, int gpx) {
  if (lambda <= 0) throw std::invalid_argument("approximate_identity: lambda must be positive");
  const double c = std::sqrt(lambda / pi);
  return CylFunction::sample(L, gpx,
                             [&](double x, double) { return c * std::exp(-lambda * x * x); });
}

// Smooth partition of unity: f(x) = b(x) / sum_m b(x - m) for a fixed bump b
// supported in (-3/4, 3/4); sum_n f(t - n) = 1 pointwise by construction.
inline LineFunction partition_of_unity(double L, int gp) {
  auto bump = [](double x) {
    const double u = x / 0.75;
    return (std::abs(u) < 1.0) ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
  };
  return LineFunction::sample(L, gp, [&](double x) {
    double s = 0;
    for (int m = -int(L); m <= int(L); ++m) s += bump(x - m);
    return bump(x) / s;
  });
}

struct WitnessReport {
  int rank = 0;                  // elementary tensors revealed by the SVD
  double partition_defect = 0;   // max |sum_n f(t-n) - 1|
  double residual_l1 = 0;        // |phi(H) - F|_1
  LineFunction partition;
};

// Surjectivity of the pairing: H(x,y) = f(x) F(x-y, pi(x)) decomposes into
// elementary tensors whose pairing sums reproduce F.
inline WitnessReport surjectivity_witness(const CylFunction& F) {
  F.require_decay();
  const int gp = F.gpx, nt = F.gpt();
  WitnessReport rep;
  rep.partition = partition_of_unity(F.L, gp);
  const LineFunction& f = rep.partition;
  // partition check on the dense grid
  double defect = 0;
  for (int it = 0; it < nt; ++it) {
    double s = 0;
    for (int n = -int(F.L); n <= int(F.L); ++n) {
      const int j = it - n * f.per_unit() + gp / 2;
      if (j >= 0 && j < gp) s += f.samples[j].real();
    }
    defect = std::max(defect, std::abs(s - 1.0));
  }
  rep.partition_defect = defect;

  Mat H(gp, gp);
  for (int ix = 0; ix < gp; ++ix) {
    const int tx = ((ix - gp / 2) % nt + nt) % nt;
    for (int iy = 0; iy < gp; ++iy) {
      const int id = ix - iy + gp / 2;
      H(ix, iy) = (id >= 0 && id < gp) ? f.samples[ix] * F.samples[std::int64_t(id) * nt + tx]
                                       : cplx{0, 0};
    }
  }
  Eigen::JacobiSVD<Mat> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec s = svd.singularValues();
  CylFunction sum = F;
  sum.samples.setZero();
  for (Eigen::Index r = 0; r < s.size(); ++r) {
    if (s[r] < 1e-12 * s[0]) break;
    ++rep.rank;
    LineFunction u = f, v = f;
    u.samples = s[r] * svd.matrixU().col(r);
    v.samples = svd.matrixV().col(r).conjugate();
    CylFunction term = pairing_phi(u, v);
    sum.samples += term.samples;
  }
  sum.samples -= F.samples;
  rep.residual_l1 = l1(sum);
  return rep;
}

enum class SeminormKind { p, q, nu };

namespace detail {
// spectral derivative along the box direction of a sampled line
inline Vec line_derivative(const Vec& v, double L, int order) {
  const int gp = int(v.size());
  Vec out = v;
  if (order == 0) return out;
  // forward DFT, multiply, inverse; band gp/2 - 1
  const int K = gp / 2 - 1;
  Vec modes = Vec::Zero(2 * K + 1);
  for (int j = -K; j <= K; ++j) {
    cplx acc{0, 0};
    for (int i = 0; i < gp; ++i) {
      const double x = -L / 2 + i * (L / gp);
      acc += v[i] * unit_phase(-2 * pi * j / L * x);
    }
    modes[j + K] = acc * (L / gp);
  }
  for (int j = -K; j <= K; ++j) modes[j + K] *= std::pow(cplx(0, 2 * pi * j / L), order);
  for (int i = 0; i < gp; ++i) {
    const double x = -L / 2 + i * (L / gp);
    cplx acc{0, 0};
    for (int j = -K; j <= K; ++j) acc += modes[j + K] * unit_phase(2 * pi * j / L * x) / L;
    out[i] = acc;
  }
  return out;
}
}  // namespace detail

// p^{a,b,c}(F) = int dt int dx (1+|x|)^a |dx^b dt^c F|;
// q^a(a) = sum (1+|n|)^a |a(n)|;  nu^{a,b}(f) = int (1+|x|)^a |dx^b f|.
inline double seminorm_p(const CylFunction& F, int alpha, int beta, int gamma) {
  if (alpha < 0 || beta < 0 || gamma < 0 || beta > 8 || gamma > 8)
    throw std::invalid_argument("seminorm: invalid orders");
  F.validate();
  const int gp = F.gpx, nt = F.gpt();
  // t-derivatives per x row (unit period), then x-derivatives per t column
  Mat vals(gp, nt);
  for (int ix = 0; ix < gp; ++ix)
    for (int it = 0; it < nt; ++it) vals(ix, it) = F.samples[std::int64_t(ix) * nt + it];
  if (gamma > 0) {
    const int K = nt / 2 - 1;
    for (int ix = 0; ix < gp; ++ix) {
      Vec modes = Vec::Zero(2 * K + 1);
      for (int j = -K; j <= K; ++j) {
        cplx acc{0, 0};
        for (int it = 0; it < nt; ++it) acc += vals(ix, it) * unit_phase(-2 * pi * j * it / double(nt));
        modes[j + K] = acc / double(nt) * std::pow(cplx(0, 2 * pi * j), gamma);
      }
      for (int it = 0; it < nt; ++it) {
        cplx acc{0, 0};
        for (int j = -K; j <= K; ++j) acc += modes[j + K] * unit_phase(2 * pi * j * it / double(nt));
        vals(ix, it) = acc;
      }
    }
  }
  if (beta > 0)
    for (int it = 0; it < nt; ++it) vals.col(it) = detail::line_derivative(vals.col(it), F.L, beta);
  double acc = 0;
  for (int ix = 0; ix < gp; ++ix) {
    const double x = -F.L / 2 + ix * F.delta();
    const double w = std::pow(1 + std::abs(x), alpha);
    for (int it = 0; it < nt; ++it) acc += w * std::abs(vals(ix, it));
  }
  return acc * F.delta() / nt;
}

inline double seminorm_q(const SequenceFunction& a, int alpha) {
  if (alpha < 0) throw std::invalid_argument("seminorm: invalid orders");
  double acc = 0;
  for (int n = -a.cutoff; n <= a.cutoff; ++n)
    acc += std::pow(1.0 + std::abs(n), alpha) * std::abs(a.at(n));
  return acc;
}

inline double seminorm_nu(const LineFunction& f, int alpha, int beta) {
  if (alpha < 0 || beta < 0 || beta > 8) throw std::invalid_argument("seminorm: invalid orders");
  f.validate();
  Vec d = detail::line_derivative(f.samples, f.L, beta);
  double acc = 0;
  for (int i = 0; i < f.gp; ++i)
    acc += std::pow(1 + std::abs(f.position(i)), alpha) * std::abs(d[i]);
  return acc * f.delta();
}

}  // namespace starcyl
