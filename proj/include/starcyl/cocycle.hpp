#pragma once

#include <map>
#include <optional>

#include "starcyl/dirac.hpp"
#include "starcyl/dixmier.hpp"
#include "starcyl/fourier.hpp"
#include "starcyl/star_product.hpp"

namespace starcyl {

// Tuple (a_0, ..., a_m) of grid functions, an optional deformation (the
// algebra elements then act through their regular representation), and the
// inner truncation window for traces. Inputs must be band-limited to half
// the window (double-truncation rule).
struct CocycleInput {
  std::vector<GridFunction> tuple;
  std::optional<DeformationParams> deformation;
  int window = 32;
};

inline GridFunction monomial(const Geometry& g, const std::vector<int>& mode) {
  return GridFunction::sample(g, [&](const std::vector<double>& x) {
    double arg = 0;
    for (int i = 0; i < g.dim(); ++i) arg += 2 * pi * mode[size_t(i)] * g.mode_step(i) * x[size_t(i)];
    return unit_phase(arg);
  });
}

namespace detail {

struct Support {
  std::vector<std::pair<std::vector<int>, cplx>> terms;
};

inline Support to_support(const GridFunction& f, int window, bool drop_mean) {
  FourierFunction phi = forward_transform(f);
  Support s;
  const double thresh = 1e-13 * std::max(1.0, phi.coeffs.cwiseAbs().maxCoeff());
  for (std::int64_t i = 0; i < phi.box.size(); ++i) {
    if (std::abs(phi.coeffs[i]) < thresh) continue;
    auto m = phi.box.unindex(i);
    bool zero = true;
    for (int v : m) zero &= (v == 0);
    if (zero && drop_mean) continue;
    for (int v : m)
      if (std::abs(v) > window / 2)
        throw std::invalid_argument("cocycle input is not band-limited to half the window");
    s.terms.emplace_back(std::move(m), phi.coeffs[i]);
  }
  return s;
}

// Per-mode spectral data of the flat operators used by the functionals.
struct ModeSpectra {
  Geometry geom;
  CliffordRep rep;
  Mat chi;

  std::vector<double> freq(const std::vector<int>& m) const {
    std::vector<double> k(m.size());
    for (size_t i = 0; i < m.size(); ++i) k[i] = m[i] * geom.mode_step(int(i));
    return k;
  }
  double abs_freq(const std::vector<int>& m) const {
    double k2 = 0;
    for (size_t i = 0; i < m.size(); ++i) {
      const double k = m[i] * geom.mode_step(int(i));
      k2 += k * k;
    }
    return std::sqrt(k2);
  }
  Mat dirac(const std::vector<int>& m) const {  // Fourier multiplier block of D
    const cplx unit =
        (geom.signature == Signature::lorentzian) ? cplx(0, 2 * pi) : cplx(2 * pi, 0);
    Mat b = Mat::Zero(rep.spinor_dim, rep.spinor_dim);
    for (int a = 0; a < geom.dim(); ++a)
      b += (unit * (m[size_t(a)] * geom.mode_step(a))) * rep.gammas[size_t(a)];
    return b;
  }
  Mat sign(const std::vector<int>& m) const {  // F = sign(D), Euclidean use
    const double ak = abs_freq(m);
    if (ak == 0) return Mat::Identity(rep.spinor_dim, rep.spinor_dim);
    return dirac(m) / (2 * pi * ak);
  }
  double delta_j(const std::vector<int>& m) const {  // Delta_J eigenvalue (flat)
    const double ak = abs_freq(m);
    return std::sqrt(1.0 + 4 * pi * pi * ak * ak);
  }
  // |D|^{-p} (Euclidean, zero mode dropped) or Delta_J^{-p} (Lorentzian)
  double weight(const std::vector<int>& m, int p) const {
    if (geom.signature == Signature::lorentzian) return std::pow(delta_j(m), -p);
    const double ak = abs_freq(m);
    return ak == 0 ? 0.0 : std::pow(2 * pi * ak, -p);
  }
};

enum class CommKind { sign, dirac, delta };

// Diagonal of chi^{eps} a_0 i^m C_1(a_1) ... C_m(a_m) W over the window box,
// one complex value per trace site, with the site's weight-descending sort
// key. C(a) is the commutator with the indicated operator; W the inverse
// power weight. With a deformation the a_i act via their left regular
// representation (the bicharacter rides along each coefficient).
struct SiteValues {
  std::vector<double> sortkey;  // descending weight rank: smaller key first
  Vec values;
};

inline SiteValues cocycle_diagonal(const ModeSpectra& spec, const CocycleInput& input,
                                   CommKind kind, int weight_power, bool insert_chi,
                                   bool conditional) {
  const Geometry& g = spec.geom;
  const int m = int(input.tuple.size()) - 1;
  if (m < 1) throw std::invalid_argument("cocycle: arity must be >= 1");
  std::vector<Support> supp;
  supp.push_back(to_support(input.tuple[0], input.window, /*drop_mean=*/true));
  for (int i = 1; i <= m; ++i)
    supp.push_back(to_support(input.tuple[size_t(i)], input.window, false));
  std::map<std::vector<int>, cplx> a0;
  for (auto& [mode, c] : supp[0].terms) a0[mode] = c;

  const ModeBox window{std::vector<int>(size_t(g.dim()), input.window)};
  const std::int64_t ns = window.size();
  SiteValues out;
  out.sortkey.resize(size_t(ns));
  out.values = Vec::Zero(ns);
  const cplx iphase = std::pow(cplx(0, 1), m);
  const double mu = g.mu_weight();
  const bool deformed = input.deformation.has_value();

  parallel_for(ns, [&](std::int64_t site) {
    const auto k = window.unindex(site);
    out.sortkey[size_t(site)] = -spec.weight(k, 1);
    // enumerate mode paths right-to-left through the commutator factors
    std::vector<size_t> choice(size_t(m), 0);
    cplx acc{0, 0};
    while (true) {
      // modes accumulated from the right: v_i, u_i for factor i
      std::vector<int> cur = k;
      Mat prod = Mat::Identity(spec.rep.spinor_dim, spec.rep.spinor_dim);
      cplx scalar = iphase * std::pow(mu, m + 1);
      bool ok = true;
      for (int i = m; i >= 1; --i) {
        const auto& [mi, ci] = supp[size_t(i)].terms[choice[size_t(i - 1)]];
        std::vector<int> next = cur;
        for (int j = 0; j < g.dim(); ++j) next[size_t(j)] += mi[size_t(j)];
        Mat blk;
        switch (kind) {
          case CommKind::sign: blk = spec.sign(next) - spec.sign(cur); break;
          case CommKind::dirac: blk = spec.dirac(next) - spec.dirac(cur); break;
          case CommKind::delta:
            blk = (spec.delta_j(next) - spec.delta_j(cur)) *
                  Mat::Identity(spec.rep.spinor_dim, spec.rep.spinor_dim);
            break;
        }
        cplx c = ci;
        if (deformed) c *= bicharacter(*input.deformation, spec.freq(mi), spec.freq(next));
        scalar *= c;
        prod = blk * prod;
        cur = next;
      }
      // a_0 must bring the path back to the trace site
      std::vector<int> m0(size_t(g.dim()), 0);
      for (int j = 0; j < g.dim(); ++j) m0[size_t(j)] = k[size_t(j)] - cur[size_t(j)];
      auto it = a0.find(m0);
      if (it == a0.end()) ok = false;
      if (ok) {
        cplx c0 = it->second;
        if (deformed) c0 *= bicharacter(*input.deformation, spec.freq(m0), spec.freq(k));
        Mat x = prod;
        if (insert_chi) x = spec.chi * x;
        const double w = (weight_power > 0) ? spec.weight(k, weight_power) : 1.0;
        cplx tr;
        if (conditional) {
          const Mat f = spec.sign(k);
          tr = 0.5 * (x.trace() + (f * x * f).trace());
        } else {
          tr = x.trace();
        }
        acc += scalar * c0 * w * tr;
      }
      // advance the choice tuple
      int pos = 0;
      while (pos < m) {
        if (++choice[size_t(pos)] < supp[size_t(pos + 1)].terms.size()) break;
        choice[size_t(pos)] = 0;
        ++pos;
      }
      if (pos == m) break;
    }
    out.values[site] = acc;
  });
  return out;
}

}  // namespace detail

// Conditional trace Tr_C(A) = (Tr(A + FAF))/2 over the inner window of the
// operator basis.
inline cplx conditional_trace(const DiscreteOperator& A, const DiscreteOperator& F, int window) {
  A.check();
  F.check();
  if (A.matrix.rows() != F.matrix.rows()) throw std::invalid_argument("conditional_trace: shapes");
  Mat sym = 0.5 * (A.matrix + F.matrix * A.matrix * F.matrix);
  cplx tr{0, 0};
  const int s = A.basis.spinor_dim;
  for (std::int64_t i = 0; i < A.basis.modes(); ++i) {
    const auto mo = A.basis.box.unindex(i);
    bool in = true;
    for (int j = 0; j < A.basis.geometry.dim(); ++j)
      if (std::abs(mo[size_t(j)]) > window) in = false;
    if (!in) continue;
    for (int a = 0; a < s; ++a) tr += sym(i * s + a, i * s + a);
  }
  return tr;
}

// Chern character tau_F(a_0, ..., a_m) = Tr_C(chi^{eps} a_0 i^m [F,a_1]...[F,a_m])
// with chi inserted when m is even and the unitization component of a_0
// removed. The geometry must be Euclidean.
inline cplx chern_character(const CocycleInput& input, const Geometry& g, const CliffordRep& rep) {
  if (g.signature != Signature::euclidean)
    throw std::invalid_argument("chern_character: Euclidean sign operator required");
  const int m = int(input.tuple.size()) - 1;
  if (m != g.dim()) throw std::invalid_argument("chern_character: arity must equal the dimension");
  detail::ModeSpectra spec{g, rep, grading_chi(rep)};
  const bool even = (m % 2 == 0);
  detail::SiteValues vals = detail::cocycle_diagonal(spec, input, detail::CommKind::sign,
                                                     /*weight_power=*/0, even,
                                                     /*conditional=*/true);
  cplx acc{0, 0};
  for (Eigen::Index i = 0; i < vals.values.size(); ++i) acc += vals.values[i];
  return acc;
}

enum class HochschildKind { dirac, deltaJ };

// Hochschild cocycles psi_D (commutators with D, grading inserted in the
// even case) and psi_DeltaJ (commutators with Delta_J, no grading), both
// against the inverse-power weight and evaluated with the ladder estimator
// of the logarithmic trace.
inline FittedConstant hochschild_cocycle(HochschildKind kind, const CocycleInput& input,
                                         const Geometry& g, const CliffordRep& rep,
                                         const Ladder& ladder) {
  const int m = int(input.tuple.size()) - 1;
  if (m != g.dim()) throw std::invalid_argument("hochschild_cocycle: arity must equal dimension");
  detail::ModeSpectra spec{g, rep, grading_chi(rep)};
  const bool chi = (kind == HochschildKind::dirac) && (m % 2 == 0);
  detail::SiteValues vals = detail::cocycle_diagonal(
      spec, input, kind == HochschildKind::dirac ? detail::CommKind::dirac : detail::CommKind::delta,
      /*weight_power=*/m, chi, /*conditional=*/false);
  // order by descending weight, then partial sums / ln N
  std::vector<std::int64_t> order(size_t(vals.values.size()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = std::int64_t(i);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    if (vals.sortkey[size_t(a)] != vals.sortkey[size_t(b)])
      return vals.sortkey[size_t(a)] < vals.sortkey[size_t(b)];
    return a < b;
  });
  std::vector<double> xs, ys;
  cplx acc{0, 0};
  std::vector<cplx> csum(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    acc += vals.values[order[i]];
    csum[i] = acc;
  }
  std::vector<double> re, im;
  for (auto N : ladder) {
    if (N < 2 || N > std::int64_t(order.size())) continue;
    xs.push_back(1.0 / std::log(double(N)));
    re.push_back(csum[size_t(N - 1)].real() / std::log(double(N)));
    im.push_back(csum[size_t(N - 1)].imag() / std::log(double(N)));
  }
  if (xs.size() < 3) throw std::invalid_argument("hochschild_cocycle: ladder too short");
  LineFit fr = fit_line(xs, re), fi = fit_line(xs, im);
  FittedConstant out;
  out.value = cplx(fr.intercept, fi.intercept);
  out.std_error = std::hypot(fr.intercept_err, fi.intercept_err);
  out.context = kind == HochschildKind::dirac ? "psi_D" : "psi_DeltaJ";
  return out;
}

enum class PairingKind { wedge, metric };

// de Rham comparison pairings by grid quadrature with spectral derivatives:
// wedge: int a_0 da_1 ^ ... ^ da_m ; metric (2D): int f (d0 g d0 h + d1 g d1 h),
// the Hodge pairing of the Riemannian metric associated to the standard
// reflection.
inline cplx de_rham_pairing(const std::vector<GridFunction>& tuple, PairingKind kind) {
  if (tuple.empty()) throw std::invalid_argument("de_rham_pairing: empty tuple");
  const Geometry& g = tuple[0].geometry;
  const int m = int(tuple.size()) - 1;
  auto derivative = [&](const GridFunction& f, int dir) {
    FourierFunction phi = forward_transform(f);
    for (std::int64_t i = 0; i < phi.box.size(); ++i) {
      const auto mo = phi.box.unindex(i);
      phi.coeffs[i] *= cplx(0, 2 * pi * mo[size_t(dir)] * g.mode_step(dir));
    }
    return inverse_transform(phi);
  };
  if (kind == PairingKind::metric) {
    if (m != 2 || g.dim() != 2)
      throw std::invalid_argument("de_rham_pairing(metric): needs a (f,g,h) tuple in 2D");
    Vec acc = tuple[0].samples;
    Vec s = Vec::Zero(acc.size());
    for (int dir = 0; dir < 2; ++dir)
      s += derivative(tuple[1], dir).samples.cwiseProduct(derivative(tuple[2], dir).samples);
    return g.cell_volume() * acc.cwiseProduct(s).sum();
  }
  if (m != g.dim()) throw std::invalid_argument("de_rham_pairing(wedge): arity must equal dim");
  if (m > 3) throw std::invalid_argument("de_rham_pairing(wedge): dimension > 3 not supported");
  // sum over permutations with sign
  std::vector<int> perm(size_t(m), 0);
  for (int i = 0; i < m; ++i) perm[size_t(i)] = i;
  Vec acc = Vec::Zero(tuple[0].samples.size());
  std::vector<std::vector<GridFunction>> partials;  // partials[i][dir] of a_{i+1}
  for (int i = 1; i <= m; ++i) {
    std::vector<GridFunction> row;
    for (int dir = 0; dir < m; ++dir) row.push_back(derivative(tuple[size_t(i)], dir));
    partials.push_back(std::move(row));
  }
  do {
    int sign = 1;  // parity of perm
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (perm[size_t(i)] > perm[size_t(j)]) sign = -sign;
    Vec term = Vec::Ones(acc.size());
    for (int i = 0; i < m; ++i)
      term = term.cwiseProduct(partials[size_t(i)][size_t(perm[size_t(i)])].samples);
    acc += double(sign) * term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return tuple[0].geometry.cell_volume() * tuple[0].samples.cwiseProduct(acc).sum();
}

enum class IdentityKind { hochschild, cyclic };
enum class ProductKind { pointwise, star };

// Residual of the Hochschild coboundary (b phi)(a_0..a_{m+1}) or of the
// cyclicity defect, normalized by the largest contributing term.
inline double cocycle_identity_check(
    IdentityKind kind, const std::function<cplx(const std::vector<GridFunction>&)>& functional,
    const std::vector<GridFunction>& tuple, ProductKind product,
    const std::optional<DeformationParams>& params = std::nullopt) {
  auto multiply = [&](const GridFunction& a, const GridFunction& b) {
    if (product == ProductKind::pointwise)
      return GridFunction{a.geometry, a.samples.cwiseProduct(b.samples)};
    if (!params) throw std::invalid_argument("star product needs deformation params");
    FourierFunction fa = forward_transform(a), fb = forward_transform(b);
    return inverse_transform(star_cylinder(fa, fb, *params));
  };
  const int arity = int(tuple.size());
  if (kind == IdentityKind::cyclic) {
    if (arity < 2) throw std::invalid_argument("cyclic check needs arity >= 2");
    const int m = arity - 1;
    std::vector<GridFunction> rot;
    rot.push_back(tuple.back());
    for (int i = 0; i + 1 < arity; ++i) rot.push_back(tuple[size_t(i)]);
    const cplx a = functional(tuple);
    const cplx b = functional(rot);
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - sgn * b) / scale;
  }
  // hochschild: the functional has arity m+1; the tuple supplies m+2 entries
  if (arity < 2) throw std::invalid_argument("hochschild check needs arity >= 2");
  const int m = arity - 2;
  std::vector<cplx> terms;
  for (int j = 0; j <= m; ++j) {
    std::vector<GridFunction> args;
    for (int i = 0; i < arity; ++i) {
      if (i == j) {
        args.push_back(multiply(tuple[size_t(i)], tuple[size_t(i + 1)]));
        ++i;
      } else {
        args.push_back(tuple[size_t(i)]);
      }
    }
    terms.push_back(((j % 2 == 0) ? 1.0 : -1.0) * functional(args));
  }
  {
    std::vector<GridFunction> args;
    args.push_back(multiply(tuple.back(), tuple.front()));
    for (int i = 1; i <= m; ++i) args.push_back(tuple[size_t(i)]);
    terms.push_back((((m + 1) % 2 == 0) ? 1.0 : -1.0) * functional(args));
  }
  cplx sum{0, 0};
  double scale = 1e-300;
  for (cplx t : terms) {
    sum += t;
    scale = std::max(scale, std::abs(t));
  }
  return std::abs(sum) / scale;
}

}  // namespace starcyl
