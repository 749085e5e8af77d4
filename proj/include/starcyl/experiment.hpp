#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "starcyl/admissibility.hpp"
#include "starcyl/crossed.hpp"
#include "starcyl/morita.hpp"
#include "starcyl/nc_integral.hpp"

namespace starcyl {

// ---------------------------------------------------------------------------
// Config: flat dotted keys over per-experiment schemas. Unknown keys are hard
// errors; physics parameters never default silently when misspelled.

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> values;  // schema defaults overlaid with file contents
  std::uint64_t seed = 1;

  double get_f(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("config: missing key " + key);
    return std::stod(it->second);
  }
  int get_i(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("config: missing key " + key);
    return std::stoi(it->second);
  }
  std::vector<double> get_list(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument("config: missing key " + key);
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
  }
  std::string canonical() const {
    std::string s = "experiment=" + experiment + "\nseed=" + std::to_string(seed) + "\n";
    for (const auto& [k, v] : values) s += k + "=" + v + "\n";
    return s;
  }
};

inline const std::map<std::string, std::map<std::string, std::string>>& experiment_schemas() {
  static const std::map<std::string, std::map<std::string, std::string>> schemas = {
      {"star-convergence",
       {{"geometry.L", "8"},
        {"geometry.grid_pts", "104"},
        {"deformation.hbar_ladder", "0.4,0.2,0.1,0.05,0.025"},
        {"pair.width_x", "3.0"},
        {"pair.width_n", "8.0"},
        {"pair.center1_x", "1.5"},
        {"pair.center1_n", "3"},
        {"pair.center2_x", "-1.0"},
        {"pair.center2_n", "-4"},
        {"tolerances.slope_low", "0.85"},
        {"tolerances.slope_high", "1.15"},
        {"tolerances.identity", "1e-8"}}},
      {"crossed-isomorphism",
       {{"geometry.L", "8"},
        {"geometry.grid_pts", "32"},
        {"deformation.hbar", "0.21"},
        {"battery.pairs", "5"},
        {"battery.band", "4"},
        {"tolerances.residual", "1e-6"}}},
      {"trace-theorem",
       {{"torus.cutoff", "158"},
        {"torus.ladder_start", "8000"},
        {"torus.ladder_ratio", "1.3"},
        {"bump.L", "4"},
        {"bump.grid_pts", "256"},
        {"bump.cutoff_x", "40"},
        {"bump.cutoff_t", "12"},
        {"bump.ladder_start", "25"},
        {"bump.ladder_stop", "200"},
        {"bump.ladder_ratio", "1.35"},
        {"tolerances.scalar", "0.05"},
        {"tolerances.lorentzian", "0.10"},
        {"tolerances.bump", "0.10"}}},
      {"character",
       {{"window.character", "96"},
        {"window.cyclicity", "1024"},
        {"ladder.start", "200"},
        {"ladder.stop", "28000"},
        {"ladder.ratio", "1.6"},
        {"tolerances.spread", "0.10"},
        {"tolerances.match", "0.10"},
        {"tolerances.cyclicity", "1e-6"},
        {"tolerances.coboundary", "1e-2"}}},
      {"polyakov-split",
       {{"window.character", "96"},
        {"ladder.start", "200"},
        {"ladder.stop", "28000"},
        {"ladder.ratio", "1.6"},
        {"tolerances.cross_fraction", "0.05"}}},
      {"admissibility",
       {{"geometry.L", "8"},
        {"geometry.grid_pts", "16"},
        {"deformation.hbar", "0.3"},
        {"basis.cutoff", "3"},
        {"boosts", "0.0,0.5,-0.8"},
        {"perturbation.angles", "0.05,0.12,0.3"},
        {"tolerances.pass", "1e-8"},
        {"tolerances.fail_factor", "1000"}}},
      {"morita",
       {{"line.L", "20"},
        {"line.grid_pts", "640"},
        {"lambda.ladder", "1,10,100"},
        {"tolerances.identity", "1e-6"},
        {"tolerances.witness", "1e-6"},
        {"tolerances.closed_form", "1e-8"}}},
      {"spectra",
       {{"modes.per_direction", "64"},
        {"schatten.L", "8"},
        {"schatten.truncations", "64,96"},
        {"tolerances.spectrum", "1e-10"},
        {"tolerances.saturation", "0.01"},
        {"tolerances.growth", "0.10"}}},
  };
  return schemas;
}

inline std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : experiment_schemas()) out.push_back(k);
  return out;
}

// Parse `key = value` lines ('#' comments); every key must be in the schema.
inline ExperimentConfig load_config(const std::string& experiment, const std::string& path,
                                    std::optional<std::uint64_t> seed_override) {
  auto sit = experiment_schemas().find(experiment);
  if (sit == experiment_schemas().end())
    throw std::invalid_argument("unknown experiment: " + experiment);
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.values = sit->second;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        bool blank = true;
        for (char c : line) blank &= std::isspace(c) != 0;
        if (blank) continue;
        throw std::invalid_argument("config: malformed line " + std::to_string(lineno));
      }
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
      };
      const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
      if (key == "seed") {
        cfg.seed = std::stoull(val);
        continue;
      }
      if (key == "experiment") continue;  // informational
      if (!cfg.values.count(key))
        throw std::invalid_argument("config: unknown key '" + key + "' for " + experiment);
      cfg.values[key] = val;
    }
  }
  if (seed_override) cfg.seed = *seed_override;
  return cfg;
}

// ---------------------------------------------------------------------------
// Report

struct Table {
  std::string name;
  std::vector<std::string> columns;            // last column "pass" when rows carry verdicts
  std::vector<std::vector<std::string>> rows;  // preformatted cells
};

struct Report {
  std::string experiment;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<Table> tables;
  bool all_pass = true;
  double duration_s = 0;  // stdout display only; never serialized

  void add_row(Table& t, std::vector<std::string> cells, std::optional<bool> pass) {
    if (pass) {
      cells.push_back(*pass ? "pass" : "fail");
      all_pass &= *pass;
    }
    t.rows.push_back(std::move(cells));
  }
};

namespace detail {
inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}
}  // namespace detail

// One CSV file per table, or one JSON document for the whole report.
// Re-running with an identical config produces byte-identical files.
inline std::vector<std::string> emit_report(const Report& rep, const std::string& format,
                                            const std::string& outdir);

// ---------------------------------------------------------------------------
// Experiment bodies

namespace experiments {

inline FourierFunction mode_gaussian(const Geometry& g, double wx, double wn, double cx,
                                     double cn) {
  FourierFunction phi = FourierFunction::zero(g);
  for (std::int64_t i = 0; i < phi.box.size(); ++i) {
    const auto m = phi.box.unindex(i);
    const double x = m[0] * g.dk(), n = double(m[1]);
    const double e =
        std::exp(-pi * (x - cx) * (x - cx) / (wx * wx) - (n - cn) * (n - cn) / (wn * wn));
    if (e > 1e-20) phi.coeffs[i] = e;
  }
  return phi;
}

inline Report star_convergence(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  Geometry g;
  g.n = 1; g.d = 1;
  g.L = cfg.get_f("geometry.L");
  g.grid_pts = cfg.get_i("geometry.grid_pts");
  g.validate();
  FourierFunction phi = mode_gaussian(g, cfg.get_f("pair.width_x"), cfg.get_f("pair.width_n"),
                                      cfg.get_f("pair.center1_x"), cfg.get_f("pair.center1_n"));
  FourierFunction psi = mode_gaussian(g, cfg.get_f("pair.width_x"), cfg.get_f("pair.width_n"),
                                      cfg.get_f("pair.center2_x"), cfg.get_f("pair.center2_n"));
  const double conv = curvature_convolution_l1(phi, psi);

  Table rungs{"rungs", {"hbar", "residual_l1", "ratio_to_hbar_bound"}, {}};
  std::vector<double> lx, ly;
  double max_ratio = 0;
  for (double h : cfg.get_list("deformation.hbar_ladder")) {
    DeformationParams p = DeformationParams::cylinder_canonical(1, h);
    auto [delta, l1v] = dirac_residual(phi, psi, p);
    const double ratio = l1v / (h * conv);
    max_ratio = std::max(max_ratio, ratio);
    lx.push_back(std::log(h));
    ly.push_back(std::log(l1v));
    rep.add_row(rungs, {format_full(h), format_full(l1v), format_full(ratio)}, std::nullopt);
  }
  LineFit fit = fit_line(lx, ly);
  Table summary{"summary", {"quantity", "value", "pass"}, {}};
  const bool slope_ok =
      fit.slope >= cfg.get_f("tolerances.slope_low") && fit.slope <= cfg.get_f("tolerances.slope_high");
  rep.add_row(summary, {"loglog_slope", format_full(fit.slope)}, slope_ok);
  rep.add_row(summary, {"bound_constant_M", format_full(max_ratio)}, max_ratio < 1e3);

  // algebra identities at machine tolerance
  const double tol = cfg.get_f("tolerances.identity");
  std::mt19937_64 rng(cfg.seed);
  Geometry gs = g;
  gs.grid_pts = 16;
  auto rnd = [&](int band) {
    FourierFunction f = FourierFunction::zero(gs);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::int64_t i = 0; i < f.box.size(); ++i) {
      const auto m = f.box.unindex(i);
      if (std::abs(m[0]) <= band && std::abs(m[1]) <= band) f.coeffs[i] = cplx(u(rng), u(rng));
    }
    return f;
  };
  DeformationParams p = DeformationParams::cylinder_canonical(1, 0.31);
  FourierFunction a = rnd(2), b = rnd(2), c = rnd(2);
  FourierFunction l = star_cylinder(star_cylinder(a, b, p), c, p);
  FourierFunction r = star_cylinder(a, star_cylinder(b, c, p), p);
  const double assoc = norm(FourierFunction{gs, l.box, l.coeffs - r.coeffs}, NormKind::L1) /
                       (norm(a, NormKind::L1) * norm(b, NormKind::L1) * norm(c, NormKind::L1));
  Table ids{"identities", {"identity", "residual", "pass"}, {}};
  rep.add_row(ids, {"associativity_relative", format_full(assoc)}, assoc < tol);
  FourierFunction inv_l = involution(star_cylinder(a, b, p));
  FourierFunction inv_r = star_cylinder(involution(b), involution(a), p);
  const double anti = (inv_l.coeffs - inv_r.coeffs).cwiseAbs().maxCoeff() /
                      std::max(1e-300, inv_l.coeffs.cwiseAbs().maxCoeff());
  rep.add_row(ids, {"involution_antihomomorphism", format_full(anti)}, anti < tol);
  // delta-mode commutator closed form
  Geometry gt;
  gt.n = 0; gt.d = 2; gt.grid_pts = 12;
  DeformationParams pt = DeformationParams::zero(0, 2, 0.23);
  pt.theta(0, 1) = 0.4;
  pt.theta(1, 0) = -0.4;
  FourierFunction da = FourierFunction::zero(gt), db = FourierFunction::zero(gt);
  da.set({2, -1}, 1.0);
  db.set({1, 3}, 1.0);
  FourierFunction comm = star_cylinder(da, db, pt);
  comm.coeffs -= star_cylinder(db, da, pt).coeffs;
  const cplx want = cplx(0, 2) * std::sin(2 * pi * pt.hbar * pt.bilinear({2, -1}, {1, 3}));
  const double delta_err = std::abs(comm.at({3, 2}) - want);
  rep.add_row(ids, {"delta_commutator_closed_form", format_full(delta_err)}, delta_err < 1e-13);

  rep.tables = {rungs, summary, ids};
  return rep;
}

inline Report crossed_isomorphism(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  Geometry g;
  g.n = 1; g.d = 1;
  g.L = cfg.get_f("geometry.L");
  g.grid_pts = cfg.get_i("geometry.grid_pts");
  g.validate();
  const double h = cfg.get_f("deformation.hbar");
  const double tol = cfg.get_f("tolerances.residual");
  const int band = cfg.get_i("battery.band");
  std::mt19937_64 rng(cfg.seed);
  auto rnd = [&]() {
    FourierFunction f = FourierFunction::zero(g);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::int64_t i = 0; i < f.box.size(); ++i) {
      const auto m = f.box.unindex(i);
      if (std::abs(m[0]) <= band && std::abs(m[1]) <= band) f.coeffs[i] = cplx(u(rng), u(rng));
    }
    return f;
  };
  Table t{"battery", {"pair", "homomorphism_residual", "fourier_consistency", "pass"}, {}};
  for (int trial = 0; trial < cfg.get_i("battery.pairs"); ++trial) {
    FourierFunction fa = rnd(), fb = rnd();
    PartialFunction a = partial_fourier(fa), b = partial_fourier(fb);
    PartialFunction lhs = q_map(star_partial(a, b, h), h, QDirection::forward);
    PartialFunction rhs = crossed_convolution(q_map(a, h, QDirection::forward),
                                              q_map(b, h, QDirection::forward), h);
    const double hom = sup_diff(lhs, rhs) / std::max(1.0, sup_norm(lhs));
    // Eq. 13 against Eq. 9 through the partial transform (mapped rate)
    DeformationParams p = DeformationParams::cylinder_canonical(1, -2 * pi * h);
    PartialFunction direct = star_partial(a, b, h);
    PartialFunction mapped = partial_fourier(star_cylinder(fa, fb, p));
    const double consistency = sup_diff(direct, mapped) / std::max(1.0, sup_norm(mapped));
    rep.add_row(t,
                {std::to_string(trial), format_full(hom), format_full(consistency)},
                hom < tol && consistency < tol);
  }
  rep.tables = {t};
  return rep;
}

inline Report trace_theorem(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  Table t{"rows", {"case", "estimate", "oracle", "relative_error", "pass"}, {}};

  const int K = cfg.get_i("torus.cutoff");
  {
    Geometry g;
    g.n = 0; g.d = 2; g.grid_pts = 16;
    GridFunction one = GridFunction::sample(g, [](const std::vector<double>&) { return 1.0; });
    IntegralOptions opt;
    opt.cutoffs = {K, K};
    opt.ladder = geometric_ladder(cfg.get_i("torus.ladder_start"), std::int64_t(pi * K * K),
                                  cfg.get_f("torus.ladder_ratio"));
    FittedConstant I = nc_integral(one, IntegralKind::scalar_laplacian, opt);
    const double err = std::abs(I.value.real() - 1.0);
    rep.add_row(t, {"torus_scalar", format_full(I.value.real()), "1", format_full(err)},
                err < cfg.get_f("tolerances.scalar"));
  }
  {
    Geometry g;
    g.n = 0; g.d = 2; g.grid_pts = 16; g.signature = Signature::lorentzian;
    GridFunction one = GridFunction::sample(g, [](const std::vector<double>&) { return 1.0; });
    IntegralOptions opt;
    opt.cutoffs = {K, K};
    opt.ladder = geometric_ladder(2 * cfg.get_i("torus.ladder_start"),
                                  std::int64_t(2 * pi * K * K), cfg.get_f("torus.ladder_ratio"));
    FittedConstant I = nc_integral(one, IntegralKind::lorentzian_deltaJ, opt);
    const double err = std::abs(I.value.real() - 1.0);
    rep.add_row(t, {"torus_lorentzian", format_full(I.value.real()), "1", format_full(err)},
                err < cfg.get_f("tolerances.lorentzian"));
  }
  {
    Geometry g;
    g.n = 1; g.d = 1;
    g.L = cfg.get_f("bump.L");
    g.grid_pts = cfg.get_i("bump.grid_pts");
    const double width = g.L / 10.8;
    GridFunction f = GridFunction::sample(g, [width](const std::vector<double>& x) {
      return std::exp(-pi * x[0] * x[0] / (width * width));
    });
    const double quad0 = norm(f, NormKind::L1);
    f.samples *= 0.5 / quad0;
    const double quad = norm(f, NormKind::L1);
    IntegralOptions opt;
    opt.cutoffs = {cfg.get_i("bump.cutoff_x"), cfg.get_i("bump.cutoff_t")};
    opt.ladder = geometric_ladder(cfg.get_i("bump.ladder_start"), cfg.get_i("bump.ladder_stop"),
                                  cfg.get_f("bump.ladder_ratio"));
    FittedConstant I = nc_integral(f, IntegralKind::scalar_laplacian, opt);
    const double err = std::abs(I.value.real() - quad) / quad;
    rep.add_row(t,
                {"bump_cylinder", format_full(I.value.real()), format_full(quad), format_full(err)},
                err < cfg.get_f("tolerances.bump"));
  }
  rep.tables = {t};
  return rep;
}

inline const std::vector<std::array<std::array<int, 2>, 3>>& character_triples() {
  static const std::vector<std::array<std::array<int, 2>, 3>> t = {{
      {{{1, 0}, {0, 1}, {-1, -1}}},
      {{{1, 1}, {-2, 1}, {1, -2}}},
      {{{0, 2}, {1, -1}, {-1, -1}}},
      {{{2, 0}, {-1, 1}, {-1, -1}}},
      {{{1, 2}, {-1, 1}, {0, -3}}},
      {{{2, 1}, {-1, -2}, {-1, 1}}},
  }};
  return t;
}

inline Report character(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  Geometry g;
  g.n = 0; g.d = 2; g.grid_pts = 16;
  CliffordRep crep = build_gammas(0, 2);
  const Ladder ladder = geometric_ladder(cfg.get_i("ladder.start"), cfg.get_i("ladder.stop"),
                                         cfg.get_f("ladder.ratio"));
  const int W = cfg.get_i("window.character");

  Table t{"triples",
          {"triple", "tau_F_imag", "c2_imag", "psi_D_imag", "match_rel_err", "pass"},
          {}};
  std::vector<cplx> c2s;
  std::vector<double> matches;
  for (size_t i = 0; i < character_triples().size(); ++i) {
    const auto& tri = character_triples()[i];
    CocycleInput in;
    in.window = W;
    for (auto& m : tri) in.tuple.push_back(monomial(g, {m[0], m[1]}));
    const cplx tau = chern_character(in, g, crep);
    const double cross = double(tri[1][0]) * tri[2][1] - double(tri[1][1]) * tri[2][0];
    const cplx wedge = cplx(0, 2 * pi) * cplx(0, 2 * pi) * cross;
    const cplx c2 = tau / wedge;
    c2s.push_back(c2);
    FittedConstant psi = hochschild_cocycle(HochschildKind::dirac, in, g, crep, ladder);
    const double match = std::abs(psi.value - tau) / std::abs(tau);
    matches.push_back(match);
    rep.add_row(t,
                {std::to_string(i), format_full(tau.imag()), format_full(c2.imag()),
                 format_full(psi.value.imag()), format_full(match)},
                match < cfg.get_f("tolerances.match"));
  }
  cplx mean{0, 0};
  for (cplx c : c2s) mean += c;
  mean /= double(c2s.size());
  double spread = 0;
  for (cplx c : c2s) spread = std::max(spread, std::abs(c - mean) / std::abs(mean));
  Table s{"summary", {"quantity", "value", "pass"}, {}};
  rep.add_row(s, {"c2_mean_imag", format_full(mean.imag())}, std::nullopt);
  rep.add_row(s, {"c2_relative_spread", format_full(spread)},
              spread < cfg.get_f("tolerances.spread"));

  // cocycle identities
  auto tau_fn = [&](const std::vector<GridFunction>& args) {
    CocycleInput in;
    in.window = cfg.get_i("window.cyclicity");
    in.tuple = args;
    return chern_character(in, g, crep);
  };
  CocycleInput first;
  first.window = W;
  for (auto& m : character_triples()[1]) first.tuple.push_back(monomial(g, {m[0], m[1]}));
  const double cyc = cocycle_identity_check(IdentityKind::cyclic, tau_fn, first.tuple,
                                            ProductKind::pointwise);
  rep.add_row(s, {"tau_F_cyclicity_residual", format_full(cyc)},
              cyc < cfg.get_f("tolerances.cyclicity"));

  auto psiD_fn = [&](const std::vector<GridFunction>& args) {
    CocycleInput in;
    in.window = W;
    in.tuple = args;
    return cplx(hochschild_cocycle(HochschildKind::dirac, in, g, crep, ladder).value);
  };
  std::vector<GridFunction> four = {monomial(g, {1, 0}), monomial(g, {0, 1}),
                                    monomial(g, {1, -1}), monomial(g, {-2, 0})};
  const double bres =
      cocycle_identity_check(IdentityKind::hochschild, psiD_fn, four, ProductKind::pointwise);
  rep.add_row(s, {"psi_D_coboundary_residual", format_full(bres)},
              bres < cfg.get_f("tolerances.coboundary"));

  Geometry gl = g;
  gl.signature = Signature::lorentzian;
  CliffordRep lrep = build_gammas(1, 1);
  auto psiJ_fn = [&](const std::vector<GridFunction>& args) {
    CocycleInput in;
    in.window = W;
    in.tuple = args;
    return cplx(hochschild_cocycle(HochschildKind::deltaJ, in, gl, lrep, ladder).value);
  };
  std::vector<GridFunction> fourl = {monomial(gl, {1, 0}), monomial(gl, {0, 1}),
                                     monomial(gl, {1, -1}), monomial(gl, {-2, 0})};
  const double bresJ =
      cocycle_identity_check(IdentityKind::hochschild, psiJ_fn, fourl, ProductKind::pointwise);
  rep.add_row(s, {"psi_DeltaJ_coboundary_residual", format_full(bresJ)},
              bresJ < cfg.get_f("tolerances.coboundary"));

  rep.tables = {t, s};
  return rep;
}

inline Report polyakov_split(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  Geometry g;
  g.n = 0; g.d = 2; g.grid_pts = 16; g.signature = Signature::lorentzian;
  CliffordRep crep = build_gammas(1, 1);
  const Ladder ladder = geometric_ladder(cfg.get_i("ladder.start"), cfg.get_i("ladder.stop"),
                                         cfg.get_f("ladder.ratio"));
  const int W = cfg.get_i("window.character");

  Table rows{"pairings", {"triple", "wedge", "metric", "psi_D", "psi_DeltaJ"}, {}};
  std::vector<cplx> wedge, metric, psiD, psiJ;
  for (size_t i = 0; i < character_triples().size(); ++i) {
    const auto& tri = character_triples()[i];
    std::vector<GridFunction> tuple;
    for (auto& m : tri) tuple.push_back(monomial(g, {m[0], m[1]}));
    wedge.push_back(de_rham_pairing(tuple, PairingKind::wedge));
    metric.push_back(de_rham_pairing(tuple, PairingKind::metric));
    CocycleInput in;
    in.window = W;
    in.tuple = tuple;
    psiD.push_back(hochschild_cocycle(HochschildKind::dirac, in, g, crep, ladder).value);
    psiJ.push_back(hochschild_cocycle(HochschildKind::deltaJ, in, g, crep, ladder).value);
    rep.add_row(rows,
                {std::to_string(i), format_full(wedge.back().real()),
                 format_full(metric.back().real()), format_full(psiD.back().imag()),
                 format_full(psiJ.back().imag())},
                std::nullopt);
  }
  auto regress = [&](const std::vector<cplx>& y) {
    Mat A(Eigen::Index(y.size()), 2);
    Vec b(Eigen::Index(y.size()));
    for (size_t i = 0; i < y.size(); ++i) {
      A(Eigen::Index(i), 0) = wedge[i];
      A(Eigen::Index(i), 1) = metric[i];
      b[Eigen::Index(i)] = y[i];
    }
    Vec x = A.colPivHouseholderQr().solve(b);
    return std::array<double, 2>{std::abs(x[0]), std::abs(x[1])};
  };
  const auto cd = regress(psiD);
  const auto cj = regress(psiJ);
  const double frac = cfg.get_f("tolerances.cross_fraction");
  Table s{"summary", {"quantity", "value", "pass"}, {}};
  rep.add_row(s, {"psi_D_wedge_coefficient", format_full(cd[0])}, std::nullopt);
  rep.add_row(s, {"psi_D_metric_fraction", format_full(cd[1] / cd[0])}, cd[1] < frac * cd[0]);
  rep.add_row(s, {"psi_DeltaJ_metric_coefficient", format_full(cj[1])}, std::nullopt);
  rep.add_row(s, {"psi_DeltaJ_wedge_fraction", format_full(cj[0] / cj[1])}, cj[0] < frac * cj[1]);
  rep.tables = {rows, s};
  return rep;
}

inline Report admissibility(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  Geometry g;
  g.n = 1; g.d = 1;
  g.L = cfg.get_f("geometry.L");
  g.grid_pts = cfg.get_i("geometry.grid_pts");
  g.signature = Signature::lorentzian;
  CliffordRep crep = build_gammas(1, 1);
  DeformationParams p = DeformationParams::cylinder_canonical(1, cfg.get_f("deformation.hbar"));
  const int K = cfg.get_i("basis.cutoff");
  ModeBasis basis = make_basis(g, K, crep.spinor_dim);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<FourierFunction> sample;
  for (int i = 0; i < 3; ++i) {
    FourierFunction f = FourierFunction::zero(g);
    for (std::int64_t j = 0; j < f.box.size(); ++j) {
      const auto m = f.box.unindex(j);
      if (std::abs(m[0]) <= 2 && std::abs(m[1]) <= 2) f.coeffs[j] = cplx(u(rng), u(rng));
    }
    sample.push_back(f);
  }

  const double pass_thr = cfg.get_f("tolerances.pass");
  const double fail_factor = cfg.get_f("tolerances.fail_factor");
  Table t{"candidates", {"candidate", "commutant_residual", "reflection_residual", "pass"}, {}};
  for (double s : cfg.get_list("boosts")) {
    RMat b(2, 2), r0(2, 2);
    b << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
    r0 << -1, 0, 0, 1;
    SpacelikeReflection refl{RMat(b * r0 * b.inverse())};
    Mat J = extend_to_basis(reflection_to_J(crep, refl).J, basis);
    AdmissibilityReport a = admissibility_check(J, sample, p, crep, K);
    rep.add_row(t,
                {"reflection_boost_" + format_full(s), format_full(a.commutant_residual),
                 format_full(a.reflection_residual)},
                a.passed);
  }
  for (double ang : cfg.get_list("perturbation.angles")) {
    Mat J = extend_to_basis(canonical_symmetry(crep).J, basis);
    Mat U = Mat::Identity(basis.size(), basis.size());
    const std::int64_t i0 = basis.index({0, 0}, 0), i1 = basis.index({1, 0}, 0);
    U(i0, i0) = std::cos(ang);
    U(i1, i1) = std::cos(ang);
    U(i0, i1) = -std::sin(ang);
    U(i1, i0) = std::sin(ang);
    Mat Jmix = U * J * U.adjoint();
    AdmissibilityReport a = admissibility_check(Jmix, sample, p, crep, K);
    const bool fails_loudly = !a.passed && a.commutant_residual > fail_factor * pass_thr;
    rep.add_row(t,
                {"mode_mixing_angle_" + format_full(ang), format_full(a.commutant_residual),
                 format_full(a.reflection_residual)},
                fails_loudly);
  }
  rep.tables = {t};
  return rep;
}

inline Report morita(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  const double L = cfg.get_f("line.L");
  const int gp = cfg.get_i("line.grid_pts");
  const double tol = cfg.get_f("tolerances.identity");
  Table t{"rows", {"check", "residual", "pass"}, {}};

  auto gaussian = [&](double c, double w) {
    return LineFunction::sample(L, gp, [=](double x) {
      return std::exp(-pi * (x - c) * (x - c) / (w * w));
    });
  };
  LineFunction f = gaussian(0.3, 0.8), gfun = gaussian(-0.1, 0.7), h = gaussian(0.1, 0.9);
  SequenceFunction a = SequenceFunction::zero(3);
  a.set(0, 0.8);
  a.set(1, cplx(0.3, 0.1));
  a.set(-2, -0.25);
  CylFunction F = CylFunction::sample(L, gp, [](double x, double tt) {
    return std::exp(-pi * x * x / 0.64) * unit_phase(2 * pi * tt);
  });
  CylFunction dummy;
  dummy.L = L;
  dummy.gpx = gp;
  dummy.samples = Vec::Zero(std::int64_t(gp) * (gp / int(L)));

  {  // balanced pairings
    CylFunction lhs = pairing_phi(module_action(ActionKind::Z_on_right, dummy, a, f), gfun);
    CylFunction rhs = pairing_phi(f, module_action(ActionKind::Z_on_left, dummy, a, gfun));
    lhs.samples -= rhs.samples;
    const double r1 = l1(lhs);
    rep.add_row(t, {"balanced_phi", format_full(r1)}, r1 < tol);
    SequenceFunction sl = pairing_psi(module_action(ActionKind::C_on_right, F, a, f), gfun, 4);
    SequenceFunction sr = pairing_psi(f, module_action(ActionKind::C_on_left, F, a, gfun), 4);
    const double r2 = (sl.values - sr.values).cwiseAbs().maxCoeff();
    rep.add_row(t, {"balanced_psi", format_full(r2)}, r2 < tol);
  }
  {  // interchange identities
    LineFunction l1v =
        module_action(ActionKind::C_on_left, pairing_phi(f, gfun), SequenceFunction::zero(1), h);
    LineFunction r1 =
        module_action(ActionKind::Z_on_right, dummy, pairing_psi(gfun, h, int(L) / 4), f);
    const double d1 = f.delta() * (l1v.samples - r1.samples).cwiseAbs().sum();
    rep.add_row(t, {"interchange_phi_psi", format_full(d1)}, d1 < tol);
    LineFunction l2 =
        module_action(ActionKind::Z_on_left, dummy, pairing_psi(f, gfun, int(L) / 4), h);
    LineFunction r2 =
        module_action(ActionKind::C_on_right, pairing_phi(gfun, h), SequenceFunction::zero(1), f);
    const double d2 = f.delta() * (l2.samples - r2.samples).cwiseAbs().sum();
    rep.add_row(t, {"interchange_psi_phi", format_full(d2)}, d2 < tol);
  }
  {  // unit-interval witness pairs to the delta
    LineFunction f0 = LineFunction::sample(L, gp, [](double x) {
      const double u = 2 * (x - 0.5);
      return (std::abs(u) < 1) ? std::exp(-1.0 / (1 - u * u)) : 0.0;
    });
    double nrm = 0;
    for (int i = 0; i < gp; ++i) nrm += std::norm(f0.samples[i]);
    f0.samples /= std::sqrt(nrm * f0.delta());
    SequenceFunction s = pairing_psi(f0, f0, 3);
    double d = std::abs(s.at(0) - cplx(1, 0));
    for (int n = 1; n <= 3; ++n) d = std::max({d, std::abs(s.at(n)), std::abs(s.at(-n))});
    rep.add_row(t, {"psi_unit_witness", format_full(d)}, d < 1e-8);
  }
  {  // phi(H) = F
    WitnessReport w = surjectivity_witness(F);
    rep.add_row(t, {"partition_defect", format_full(w.partition_defect)},
                w.partition_defect < 1e-10);
    rep.add_row(t, {"phi_surjectivity_residual", format_full(w.residual_l1)},
                w.residual_l1 < cfg.get_f("tolerances.witness"));
  }
  {  // Gaussian closed form for psi
    LineFunction g1 = gaussian(0, 1);
    SequenceFunction s = pairing_psi(g1, g1, 3);
    double d = 0;
    for (int n = -3; n <= 3; ++n)
      d = std::max(d, std::abs(s.at(n).real() - std::exp(-pi * n * n / 2.0) / std::sqrt(2.0)));
    rep.add_row(t, {"gaussian_closed_form", format_full(d)},
                d < cfg.get_f("tolerances.closed_form"));
  }
  {  // approximate identity convergence
    double prev = 1e300;
    bool mono = true;
    for (double lam : cfg.get_list("lambda.ladder")) {
      CylFunction e = approximate_identity(lam, L, gp);
      LineFunction ef = module_action(ActionKind::C_on_left, e, SequenceFunction::zero(1), f);
      const double err = f.delta() * (ef.samples - f.samples).cwiseAbs().sum();
      mono &= (err < prev);
      prev = err;
    }
    rep.add_row(t, {"approximate_identity_monotone", format_full(prev)}, mono);
  }
  rep.tables = {t};
  return rep;
}

inline Report spectra(const ExperimentConfig& cfg) {
  Report rep;
  rep.experiment = cfg.experiment;
  rep.seed = cfg.seed;
  Table t{"rows", {"check", "value", "pass"}, {}};

  {  // anticommutation relations, exhaustive to dimension 6
    double worst = 0;
    for (int m = 1; m <= 6; ++m)
      for (int p = 0; p <= m; ++p) {
        CliffordRep r = build_gammas(p, m - p);
        const Mat id = Mat::Identity(r.spinor_dim, r.spinor_dim);
        for (int A = 0; A < m; ++A)
          for (int B = 0; B < m; ++B) {
            Mat anti = r.gammas[size_t(A)] * r.gammas[size_t(B)] +
                       r.gammas[size_t(B)] * r.gammas[size_t(A)];
            Mat want = (A == B) ? Mat(2.0 * r.eta[A] * id) : Mat(Mat::Zero(id.rows(), id.cols()));
            worst = std::max(worst, (anti - want).cwiseAbs().maxCoeff());
          }
      }
    rep.add_row(t, {"anticommutation_worst", format_full(worst)}, worst < 1e-13);
  }
  {  // flat Lorentzian Delta_J spectrum at the configured mode count
    const int half = cfg.get_i("modes.per_direction") / 2;
    Geometry g;
    g.n = 0; g.d = 2;
    g.grid_pts = 2 * half + 2;
    g.signature = Signature::lorentzian;
    CliffordRep crep = build_gammas(1, 1);
    BlockDiagOperator D = dirac_blocks(crep, g, half);
    Mat jsp = canonical_symmetry(crep).J;
    auto [dj, delta] = j_square_delta(D, jsp);
    double worst = 0;
    for (std::int64_t i = 0; i < D.basis.modes(); ++i) {
      const auto m = D.basis.box.unindex(i);
      const double want = std::sqrt(1.0 + 4 * pi * pi * (double(m[0]) * m[0] + double(m[1]) * m[1]));
      Eigen::SelfAdjointEigenSolver<Mat> es(delta.blocks[size_t(i)]);
      worst = std::max(worst, std::abs(es.eigenvalues()[0] - want));
      worst = std::max(worst, std::abs(es.eigenvalues()[1] - want));
    }
    rep.add_row(t, {"delta_J_spectrum_worst", format_full(worst)},
                worst < cfg.get_f("tolerances.spectrum"));
  }
  {  // Schatten saturation for [F, pi(a)] on the 2D cylinder
    const double L = cfg.get_f("schatten.L");
    auto truncs = cfg.get_list("schatten.truncations");
    std::vector<double> s3, s1;
    for (double tk : truncs) {
      const int KR = int(tk * L), KT = int(tk);
      // a = single torus monomial: the commutator is mode-block diagonal
      double sum3 = 0, sum1 = 0;
      for (int j = -KR; j <= KR; ++j)
        for (int n = -KT; n <= KT; ++n) {
          const double kx = j / L, kn = n;
          const double ax = std::hypot(kx, kn);
          const double bx = std::hypot(kx, kn + 1.0);
          // block F(k+m)-F(k) for m = (0,1); singular values of the 2x2
          Mat fa(2, 2), fb(2, 2);
          CliffordRep crep = build_gammas(0, 2);
          Mat da = 2 * pi * (kx * crep.gammas[0] + kn * crep.gammas[1]);
          Mat db = 2 * pi * (kx * crep.gammas[0] + (kn + 1.0) * crep.gammas[1]);
          fa = (ax == 0) ? Mat(Mat::Identity(2, 2)) : Mat(da / (2 * pi * ax));
          fb = (bx == 0) ? Mat(Mat::Identity(2, 2)) : Mat(db / (2 * pi * bx));
          Eigen::JacobiSVD<Mat> svd(fb - fa);
          for (int q = 0; q < 2; ++q) {
            sum3 += std::pow(svd.singularValues()[q], 3.0);
            sum1 += svd.singularValues()[q];
          }
        }
      s3.push_back(sum3);
      s1.push_back(sum1);
    }
    const size_t n = s3.size();
    const double change3 = std::abs(s3[n - 1] - s3[n - 2]) / s3[n - 2];
    const double change1 = (s1[n - 1] - s1[n - 2]) / s1[n - 2];
    rep.add_row(t, {"schatten_q3_change", format_full(change3)},
                change3 < cfg.get_f("tolerances.saturation"));
    rep.add_row(t, {"schatten_q1_growth", format_full(change1)},
                change1 > cfg.get_f("tolerances.growth"));
  }
  rep.tables = {t};
  return rep;
}

}  // namespace experiments

inline Report run_experiment(const ExperimentConfig& cfg) {
  Report rep;
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.experiment == "star-convergence") rep = experiments::star_convergence(cfg);
  else if (cfg.experiment == "crossed-isomorphism") rep = experiments::crossed_isomorphism(cfg);
  else if (cfg.experiment == "trace-theorem") rep = experiments::trace_theorem(cfg);
  else if (cfg.experiment == "character") rep = experiments::character(cfg);
  else if (cfg.experiment == "polyakov-split") rep = experiments::polyakov_split(cfg);
  else if (cfg.experiment == "admissibility") rep = experiments::admissibility(cfg);
  else if (cfg.experiment == "morita") rep = experiments::morita(cfg);
  else if (cfg.experiment == "spectra") rep = experiments::spectra(cfg);
  else throw std::invalid_argument("unknown experiment: " + cfg.experiment);
  rep.config_hash = fnv1a(cfg.canonical());
  rep.duration_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline std::vector<std::string> emit_report(const Report& rep, const std::string& format,
                                            const std::string& outdir) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  std::vector<std::string> written;
  if (format == "csv") {
    for (const auto& t : rep.tables) {
      const std::string path = outdir + "/" + rep.experiment + "__" + t.name + ".csv";
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("emit_report: cannot write " + path);
      for (size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << detail::csv_escape(t.columns[c]);
      out << "\r\n";
      for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << detail::csv_escape(row[c]);
        out << "\r\n";
      }
      written.push_back(path);
    }
    return written;
  }
  if (format != "json") throw std::invalid_argument("emit_report: format must be csv or json");
  const std::string path = outdir + "/" + rep.experiment + ".json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot write " + path);
  out << "{\n  \"experiment\": \"" << rep.experiment << "\",\n";
  out << "  \"config_hash\": \"" << std::hex << rep.config_hash << std::dec << "\",\n";
  out << "  \"seed\": " << rep.seed << ",\n";
  out << "  \"all_pass\": " << (rep.all_pass ? "true" : "false") << ",\n  \"tables\": {\n";
  for (size_t ti = 0; ti < rep.tables.size(); ++ti) {
    const auto& t = rep.tables[ti];
    out << "    \"" << t.name << "\": {\n      \"columns\": [";
    for (size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? ", " : "") << "\"" << t.columns[c] << "\"";
    out << "],\n      \"rows\": [\n";
    for (size_t r = 0; r < t.rows.size(); ++r) {
      out << "        [";
      for (size_t c = 0; c < t.rows[r].size(); ++c)
        out << (c ? ", " : "") << "\"" << t.rows[r][c] << "\"";
      out << "]" << (r + 1 < t.rows.size() ? "," : "") << "\n";
    }
    out << "      ]\n    }" << (ti + 1 < rep.tables.size() ? "," : "") << "\n";
  }
  out << "  }\n}\n";
  written.push_back(path);
  return written;
}

}  // namespace starcyl
