#pragma once

#include "starcyl/fourier.hpp"
#include "starcyl/operators.hpp"

namespace starcyl {

namespace detail {

inline void require_same_geometry(const FourierFunction& a, const FourierFunction& b) {
  const Geometry &ga = a.geometry, &gb = b.geometry;
  if (ga.n != gb.n || ga.d != gb.d || ga.L != gb.L || ga.grid_pts != gb.grid_pts)
    throw std::invalid_argument("geometry mismatch");
  if (a.box.cutoffs != b.box.cutoffs) throw std::invalid_argument("mode box mismatch");
}

// Frequency vectors for every flat index of a box, flattened dim-major.
inline std::vector<double> box_frequencies(const Geometry& g, const ModeBox& box) {
  const std::int64_t nm = box.size();
  const int m = g.dim();
  std::vector<double> freq(size_t(nm * m));
  for (std::int64_t i = 0; i < nm; ++i) {
    const auto mi = box.unindex(i);
    for (int j = 0; j < m; ++j) freq[size_t(i * m + j)] = mi[size_t(j)] * g.mode_step(j);
  }
  return freq;
}

// Twisted mu-convolution (phi x psi)(k) = sum_l w phi(l) psi(k-l) phase(l,k)
// with phase(l,k) = exp(i [lin.l + (Q l).k]) style terms supplied per call.
// The direct double lattice sum is the hot loop; output modes run in
// parallel, inner sums stay ordered for determinism.
template <class Phase>
inline FourierFunction twisted_convolution(const FourierFunction& phi, const FourierFunction& psi,
                                           Phase&& phase, double weight) {
  require_same_geometry(phi, psi);
  const Geometry& g = phi.geometry;
  const ModeBox& box = phi.box;
  const std::int64_t nm = box.size();
  const int m = g.dim();
  const auto freq = box_frequencies(g, box);
  FourierFunction out = phi;
  out.coeffs.setZero();

  // offsets to enumerate k - l without re-deriving multi-indices
  std::vector<std::int64_t> stride(size_t(m), {});
  {
    std::int64_t s = 1;
    for (int i = m - 1; i >= 0; --i) {
      stride[size_t(i)] = s;
      s *= 2 * box.cutoffs[size_t(i)] + 1;
    }
  }
  parallel_for(nm, [&](std::int64_t ko) {
    const auto kmi = box.unindex(ko);
    const double* fk = &freq[size_t(ko * m)];
    cplx acc{0, 0};
    std::vector<int> diff(size_t(m), {});
    for (std::int64_t lo = 0; lo < nm; ++lo) {
      const cplx pl = phi.coeffs[lo];
      if (pl == cplx{0, 0}) continue;
      const auto lmi = box.unindex(lo);
      bool inside = true;
      std::int64_t po = 0;
      for (int i = 0; i < m; ++i) {
        const int v = kmi[size_t(i)] - lmi[size_t(i)];
        if (v < -box.cutoffs[size_t(i)] || v > box.cutoffs[size_t(i)]) { inside = false; break; }
        po += (v + box.cutoffs[size_t(i)]) * stride[size_t(i)];
      }
      if (!inside) continue;
      const cplx ps = psi.coeffs[po];
      if (ps == cplx{0, 0}) continue;
      acc += pl * ps * phase(&freq[size_t(lo * m)], fk);
    }
    out.coeffs[ko] = weight * acc;
  });
  return out;
}

}  // namespace detail

// (phi * psi)(k) = int dmu(l) phi(l) psi(k-l) sigma_hbar(l,k), truncated to
// the common box. Outputs are exact wherever the summand support fits inside
// the input cutoffs; tests keep supports inside half the box for that reason.
inline FourierFunction star_cylinder(const FourierFunction& phi, const FourierFunction& psi,
                                     const DeformationParams& p) {
  p.validate();
  const Geometry& g = phi.geometry;
  if (p.n != g.n || p.d != g.d) throw std::invalid_argument("deformation/geometry split mismatch");
  const int m = g.dim();
  const double* th = p.theta.data();  // column-major (i + m*j) -> theta(i,j)
  const double h = p.hbar;
  return detail::twisted_convolution(
      phi, psi,
      [m, th, h](const double* l, const double* k) {
        double s = 0;
        for (int j = 0; j < m; ++j) {
          double col = 0;
          for (int i = 0; i < m; ++i) col += th[i + m * j] * l[i];
          s += col * k[j];
        }
        return unit_phase(2 * pi * h * s);
      },
      g.mu_weight());
}

enum class StarKind { moyal, torus };

// Reference products implemented verbatim: the plane kernel with phase
// exp(-i hbar (q'.p - p'.q)) on R^{2nu}, and the torus kernel with phase
// exp(2 pi i hbar theta(m, n)) on Z^d.
inline FourierFunction star_reference(StarKind kind, const FourierFunction& phi,
                                      const FourierFunction& psi, const DeformationParams& p) {
  const Geometry& g = phi.geometry;
  if (kind == StarKind::moyal) {
    if (g.d != 0 || g.n % 2 != 0)
      throw std::invalid_argument("star_reference(moyal): needs d = 0 and even n");
    const int nu = g.n / 2;
    const double h = p.hbar;
    return detail::twisted_convolution(
        phi, psi,
        [nu, h](const double* l, const double* k) {
          // l = (p', q'), k = (p, q)
          double s = 0;
          for (int i = 0; i < nu; ++i) s += l[nu + i] * k[i] - l[i] * k[nu + i];
          return unit_phase(-h * s);
        },
        g.mu_weight());
  }
  if (g.n != 0) throw std::invalid_argument("star_reference(torus): needs n = 0");
  p.validate();
  const int m = g.dim();
  const double* th = p.theta.data();
  const double h = p.hbar;
  return detail::twisted_convolution(
      phi, psi,
      [m, th, h](const double* l, const double* k) {
        double s = 0;
        for (int j = 0; j < m; ++j) {
          double col = 0;
          for (int i = 0; i < m; ++i) col += th[i + m * j] * l[i];
          s += col * k[j];
        }
        return unit_phase(2 * pi * h * s);
      },
      1.0);
}

// phi*(k) = conj(phi(-k)), independent of hbar.
inline FourierFunction involution(const FourierFunction& phi) {
  FourierFunction out = phi;
  const std::int64_t nm = phi.box.size();
  for (std::int64_t i = 0; i < nm; ++i) {
    auto mi = phi.box.unindex(i);
    for (auto& v : mi) v = -v;
    out.coeffs[phi.box.index(mi)] = std::conj(phi.coeffs[i]);
  }
  return out;
}

// {phi,psi}(k) = 4 pi int dmu(l) phi(l) psi(k-l) theta(l,k).
inline FourierFunction poisson_bracket(const FourierFunction& phi, const FourierFunction& psi,
                                       const DeformationParams& p) {
  p.validate();
  const Geometry& g = phi.geometry;
  const int m = g.dim();
  const double* th = p.theta.data();
  return detail::twisted_convolution(
      phi, psi,
      [m, th](const double* l, const double* k) -> cplx {
        double s = 0;
        for (int j = 0; j < m; ++j) {
          double col = 0;
          for (int i = 0; i < m; ++i) col += th[i + m * j] * l[i];
          s += col * k[j];
        }
        return {4 * pi * s, 0.0};
      },
      g.mu_weight());
}

// Residual of Dirac's condition at scale hbar:
//   Delta = (phi*psi - psi*phi)/(i hbar) - {phi, psi},
// returned with its L1 norm. The L1 norm is used as the documented upper
// bound for the operator norm throughout.
inline std::pair<FourierFunction, double> dirac_residual(const FourierFunction& phi,
                                                         const FourierFunction& psi,
                                                         const DeformationParams& p) {
  if (p.hbar == 0.0) throw std::invalid_argument("dirac_residual: hbar = 0");
  FourierFunction fg = star_cylinder(phi, psi, p);
  FourierFunction gf = star_cylinder(psi, phi, p);
  FourierFunction pb = poisson_bracket(phi, psi, p);
  FourierFunction delta = fg;
  delta.coeffs = (fg.coeffs - gf.coeffs) / cplx(0, p.hbar) - pb.coeffs;
  return {delta, norm(delta, NormKind::L1)};
}

// L1 of the mu-convolution |k|^2|phi| (*) |k|^2|psi| -- the comparison scale
// in the hbar bound for Dirac's condition.
inline double curvature_convolution_l1(const FourierFunction& phi, const FourierFunction& psi) {
  auto weighted = [](const FourierFunction& f) {
    FourierFunction o = f;
    const int m = f.geometry.dim();
    for (std::int64_t i = 0; i < f.box.size(); ++i) {
      const auto mi = f.box.unindex(i);
      double k2 = 0;
      for (int j = 0; j < m; ++j) {
        const double kj = mi[size_t(j)] * f.geometry.mode_step(j);
        k2 += kj * kj;
      }
      o.coeffs[i] = k2 * std::abs(f.coeffs[i]);
    }
    return o;
  };
  FourierFunction a = weighted(phi), b = weighted(psi);
  FourierFunction conv = detail::twisted_convolution(
      a, b, [](const double*, const double*) { return cplx{1, 0}; }, phi.geometry.mu_weight());
  return norm(conv, NormKind::L1);
}

enum class Side { left, right };

// Matrix of Psi -> phi * Psi (left) or Psi -> Psi * phi (right) on the
// truncated basis, in the sqrt(mu)-orthonormalized coordinates.
inline DiscreteOperator regular_representation(const FourierFunction& phi,
                                               const DeformationParams& p, Side side,
                                               int basis_cutoff) {
  p.validate();
  const Geometry& g = phi.geometry;
  ModeBasis basis = make_basis(g, basis_cutoff, 1);
  DiscreteOperator op = DiscreteOperator::zero(basis);
  const std::int64_t nm = basis.modes();
  const double w = g.mu_weight();
  const int m = g.dim();
  std::vector<double> fk(size_t(m), 0.0);
  std::vector<double> fl(size_t(m), 0.0);
  std::vector<double> fd(size_t(m), 0.0);
  for (std::int64_t ik = 0; ik < nm; ++ik) {
    const auto km = basis.box.unindex(ik);
    for (int j = 0; j < m; ++j) fk[size_t(j)] = km[size_t(j)] * g.mode_step(j);
    for (std::int64_t il = 0; il < nm; ++il) {
      const auto lm = basis.box.unindex(il);
      std::vector<int> dm(size_t(m), {});
      for (int j = 0; j < m; ++j) dm[size_t(j)] = km[size_t(j)] - lm[size_t(j)];
      const cplx c = phi.at(dm);
      if (c == cplx{0, 0}) continue;
      for (int j = 0; j < m; ++j) {
        fl[size_t(j)] = lm[size_t(j)] * g.mode_step(j);
        fd[size_t(j)] = dm[size_t(j)] * g.mode_step(j);
      }
      const cplx sigma = (side == Side::left) ? bicharacter(p, fd, fk) : bicharacter(p, fl, fk);
      op.matrix(ik, il) = w * c * sigma;
    }
  }
  return op;
}

}  // namespace starcyl
