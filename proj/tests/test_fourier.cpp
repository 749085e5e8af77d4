#include <catch2/catch_amalgamated.hpp>

#include "starcyl/fourier.hpp"

using namespace starcyl;

namespace {

Geometry torus1(int gp = 64) {
  Geometry g;
  g.n = 0; g.d = 1; g.grid_pts = gp;
  return g;
}

Geometry line1(double L = 16.0, int gp = 256) {
  Geometry g;
  g.n = 1; g.d = 0; g.L = L; g.grid_pts = gp;
  return g;
}

FourierFunction random_band_limited(const Geometry& g, int band, std::mt19937_64& rng) {
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

}  // namespace

TEST_CASE("geometry validation") {
  Geometry g = torus1();
  g.grid_pts = 5;
  REQUIRE_THROWS_AS(g.validate(), std::invalid_argument);
  g.grid_pts = 64;
  g.L = 0;
  REQUIRE_THROWS_AS(g.validate(), std::invalid_argument);
  g.L = 1;
  g.n = 0; g.d = 0;
  REQUIRE_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("constant on T^1 transforms to delta at mode 0") {
  Geometry g = torus1();
  GridFunction f = GridFunction::sample(g, [](const std::vector<double>&) { return cplx(1, 0); });
  FourierFunction phi = forward_transform(f);
  REQUIRE(std::abs(phi.at({0}) - cplx(1, 0)) < 1e-13);
  for (int m = 1; m <= g.cutoff(); ++m) {
    REQUIRE(std::abs(phi.at({m})) < 1e-13);
    REQUIRE(std::abs(phi.at({-m})) < 1e-13);
  }
}

TEST_CASE("single torus mode") {
  Geometry g = torus1();
  GridFunction f = GridFunction::sample(
      g, [](const std::vector<double>& x) { return unit_phase(2 * pi * 3 * x[0]); });
  FourierFunction phi = forward_transform(f);
  REQUIRE(std::abs(phi.at({3}) - cplx(1, 0)) < 1e-13);
  REQUIRE(std::abs(phi.at({2})) < 1e-13);
  REQUIRE(std::abs(phi.at({-3})) < 1e-13);
}

TEST_CASE("Gaussian on R transforms to Gaussian") {
  Geometry g = line1();
  GridFunction f = GridFunction::sample(
      g, [](const std::vector<double>& x) { return std::exp(-pi * x[0] * x[0]); });
  FourierFunction phi = forward_transform(f);
  for (int j = -40; j <= 40; ++j) {
    const double k = j * g.dk();
    REQUIRE(std::abs(phi.at({j}) - std::exp(-pi * k * k)) < 1e-8);
  }
}

TEST_CASE("round trip, Parseval, linearity on random band-limited data") {
  Geometry g;
  g.n = 1; g.d = 1; g.L = 8; g.grid_pts = 32;
  std::mt19937_64 rng(7);
  FourierFunction phi = random_band_limited(g, 6, rng);
  GridFunction f = inverse_transform(phi);
  FourierFunction phi2 = forward_transform(f);
  REQUIRE((phi2.coeffs - phi.coeffs).cwiseAbs().maxCoeff() < 1e-10);

  // Parseval
  const double a = norm(f, NormKind::L2), b = norm(phi, NormKind::L2);
  REQUIRE(std::abs(a - b) < 1e-10 * std::max(1.0, b));

  // delta at mode 0 -> constant 1
  FourierFunction d0 = FourierFunction::zero(g);
  d0.set(std::vector<int>{0, 0}, 1.0 / g.mu_weight());
  GridFunction one = inverse_transform(d0);
  REQUIRE((one.samples.array() - cplx(1, 0)).abs().maxCoeff() < 1e-10);

  // linearity
  FourierFunction psi = random_band_limited(g, 6, rng);
  GridFunction fp = inverse_transform(psi);
  GridFunction comb{g, 2.0 * f.samples + cplx(0, 3) * fp.samples};
  FourierFunction t = forward_transform(comb);
  Vec expect = 2.0 * phi.coeffs + cplx(0, 3) * psi.coeffs;
  REQUIRE((t.coeffs - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("forward transform of a real even function is real") {
  Geometry g = line1(8, 64);
  GridFunction f = GridFunction::sample(g, [](const std::vector<double>& x) {
    return std::exp(-pi * x[0] * x[0]) * std::cos(2 * pi * x[0]);
  });
  FourierFunction phi = forward_transform(f);
  REQUIRE(phi.coeffs.imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norms") {
  Geometry g = line1(16, 64);
  FourierFunction phi = FourierFunction::zero(g);
  phi.set({5}, 3.0);
  REQUIRE(norm(phi, NormKind::L1) == Catch::Approx(3.0 * g.dk()));
  REQUIRE(norm(FourierFunction::zero(g), NormKind::L1) == 0.0);

  // L1 of Gaussian e^{-pi k^2} over R-modes ~ 1
  FourierFunction ga = FourierFunction::zero(g);
  for (int j = -g.cutoff(); j <= g.cutoff(); ++j) {
    const double k = j * g.dk();
    ga.set({j}, std::exp(-pi * k * k));
  }
  REQUIRE(std::abs(norm(ga, NormKind::L1) - 1.0) < 1e-6);

  Geometry gt = torus1();
  FourierFunction tphi = FourierFunction::zero(gt);
  tphi.set({4}, 3.0);
  REQUIRE(norm(tphi, NormKind::L1) == Catch::Approx(3.0));
}

TEST_CASE("partial transform") {
  Geometry g;
  g.n = 1; g.d = 1; g.L = 8; g.grid_pts = 32;
  std::mt19937_64 rng(11);

  SECTION("single torus mode is a one-term sum") {
    FourierFunction phi = FourierFunction::zero(g);
    phi.set({3, 2}, cplx(0.5, -0.25));
    PartialFunction pf = partial_fourier(phi);
    const std::int64_t nt = pf.t_size();
    for (int it = 0; it < g.grid_pts; ++it) {
      const double t = double(it) / g.grid_pts;
      const cplx expect = cplx(0.5, -0.25) * unit_phase(2 * pi * 2 * t);
      REQUIRE(std::abs(pf.values[(3 + g.cutoff()) * nt + it] - expect) < 1e-12);
    }
  }

  SECTION("full transform = partial then R-direction transform") {
    FourierFunction phi = random_band_limited(g, 6, rng);
    GridFunction full = inverse_transform(phi);
    PartialFunction pf = partial_fourier(phi);
    // finish the R direction by hand: f(x,t) = sum_j dk pf(j,t) e^{2 pi i j dk x}
    const std::int64_t nt = pf.t_size();
    double maxerr = 0;
    for (int ix = 0; ix < g.grid_pts; ++ix) {
      const double x = g.position(0, ix);
      for (int it = 0; it < g.grid_pts; ++it) {
        cplx acc{0, 0};
        for (int j = -g.cutoff(); j <= g.cutoff(); ++j)
          acc += g.dk() * pf.values[(j + g.cutoff()) * nt + it] *
                 unit_phase(2 * pi * j * g.dk() * x);
        maxerr = std::max(maxerr, std::abs(acc - full.samples[ix * g.grid_pts + it]));
      }
    }
    REQUIRE(maxerr < 1e-10);
  }

  SECTION("real-valued iff conjugate-symmetric in torus modes") {
    FourierFunction phi = FourierFunction::zero(g);
    phi.set({2, 1}, cplx(0.3, 0.7));
    phi.set({2, -1}, std::conj(cplx(0.3, 0.7)));
    PartialFunction pf = partial_fourier(phi);
    const std::int64_t nt = pf.t_size();
    for (int it = 0; it < g.grid_pts; ++it)
      REQUIRE(std::abs(pf.values[(2 + g.cutoff()) * nt + it].imag()) < 1e-12);
  }

  SECTION("d = 0 is an error") {
    Geometry gl = line1();
    FourierFunction phi = FourierFunction::zero(gl);
    REQUIRE_THROWS_AS(partial_fourier(phi), std::invalid_argument);
  }
}
