#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "starcyl/morita.hpp"

using namespace starcyl;

namespace {

constexpr double kL = 20;
constexpr int kGp = 640;

LineFunction gaussian_line(double center = 0.0, double width = 1.0) {
  return LineFunction::sample(kL, kGp, [=](double x) {
    return std::exp(-pi * (x - center) * (x - center) / (width * width));
  });
}

CylFunction gaussian_cyl(double width = 1.0, int tmode = 0) {
  return CylFunction::sample(kL, kGp, [=](double x, double t) {
    return std::exp(-pi * x * x / (width * width)) *
           (tmode ? cplx(std::cos(2 * pi * tmode * t), std::sin(2 * pi * tmode * t)) : cplx(1, 0));
  });
}

double line_l1_diff(const LineFunction& a, const LineFunction& b) {
  return a.delta() * (a.samples - b.samples).cwiseAbs().sum();
}

}  // namespace

TEST_CASE("types and certificates") {
  LineFunction f = gaussian_line();
  REQUIRE_NOTHROW(f.require_decay());
  LineFunction wide = LineFunction::sample(kL, kGp, [](double x) { return std::exp(-0.01 * x * x); });
  REQUIRE(wide.decay_defect() > 1e-10);
  REQUIRE_THROWS_AS(wide.require_decay(), std::invalid_argument);

  SequenceFunction a = SequenceFunction::zero(4);
  a.set(0, 1.0);
  REQUIRE_NOTHROW(a.require_tail());
  a.set(4, 1.0);
  REQUIRE_THROWS_AS(a.require_tail(), std::invalid_argument);
}

TEST_CASE("appendix product") {
  SECTION("t-independent factors reduce to ordinary convolution") {
    CylFunction F = gaussian_cyl(0.8), G = gaussian_cyl(0.6);
    CylFunction got = appendix_product(F, G);
    // closed form: conv of two Gaussians
    const double w1 = 0.8, w2 = 0.6;
    const double wsum = std::sqrt(w1 * w1 + w2 * w2);
    CylFunction want = CylFunction::sample(kL, kGp, [&](double x, double) {
      return (w1 * w2 / wsum) * std::exp(-pi * x * x / (wsum * wsum));
    });
    double err = 0;
    for (Eigen::Index i = 0; i < got.samples.size(); ++i)
      err = std::max(err, std::abs(got.samples[i] - want.samples[i]));
    REQUIRE(err < 1e-8);
  }

  SECTION("nascent delta: F * e_lambda approaches F") {
    CylFunction F = gaussian_cyl(1.0, 1);
    double prev = 1e300;
    for (double lam : {1.0, 10.0, 100.0}) {
      CylFunction e = approximate_identity(lam, kL, kGp);
      CylFunction prod = appendix_product(F, e);
      prod.samples -= F.samples;
      const double err = l1(prod);
      REQUIRE(err < prev);
      prev = err;
    }
  }

  SECTION("associativity") {
    CylFunction A = gaussian_cyl(0.9, 1), B = gaussian_cyl(0.7, 2), C = gaussian_cyl(0.5, 0);
    CylFunction l = appendix_product(appendix_product(A, B), C);
    CylFunction r = appendix_product(A, appendix_product(B, C));
    l.samples -= r.samples;
    REQUIRE(l1(l) < 1e-6);
  }
}

TEST_CASE("module actions") {
  LineFunction f = gaussian_line(0.3, 0.8);

  SECTION("the convolution unit acts as the identity") {
    SequenceFunction d0 = SequenceFunction::zero(1);
    d0.set(0, 1.0);
    CylFunction dummy;
    dummy.L = kL; dummy.gpx = kGp; dummy.samples = Vec::Zero(kGp * (kGp / int(kL)));
    LineFunction r1 = module_action(ActionKind::Z_on_right, dummy, d0, f);
    LineFunction r2 = module_action(ActionKind::Z_on_left, dummy, d0, f);
    REQUIRE((r1.samples - f.samples).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((r2.samples - f.samples).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("delta at one shifts the argument") {
    SequenceFunction d1 = SequenceFunction::zero(2);
    d1.set(1, 1.0);
    CylFunction dummy;
    dummy.L = kL; dummy.gpx = kGp; dummy.samples = Vec::Zero(kGp * (kGp / int(kL)));
    LineFunction r = module_action(ActionKind::Z_on_right, dummy, d1, f);
    // (f.a)(x) = f(x+1)
    const int ppu = f.per_unit();
    for (int i = 0; i + ppu < kGp; ++i)
      REQUIRE(std::abs(r.samples[i] - f.samples[i + ppu]) < 1e-14);
  }

  SECTION("t-independent F acts by convolution") {
    CylFunction F = gaussian_cyl(0.7);
    LineFunction got = module_action(ActionKind::C_on_left, F, SequenceFunction::zero(1), f);
    // direct quadrature oracle
    LineFunction want = f;
    for (int ix = 0; ix < kGp; ++ix) {
      cplx acc{0, 0};
      for (int iy = 0; iy < kGp; ++iy) {
        const int id = ix - iy + kGp / 2;
        if (id < 0 || id >= kGp) continue;
        const double xy = -kL / 2 + id * f.delta();
        acc += std::exp(-pi * xy * xy / (0.7 * 0.7)) * f.samples[iy];
      }
      want.samples[ix] = f.delta() * acc;
    }
    REQUIRE(line_l1_diff(got, want) < 1e-8);
  }

  SECTION("shifts beyond the safe box error out") {
    SequenceFunction big = SequenceFunction::zero(int(kL) / 2 + 1);
    big.set(0, 1.0);
    CylFunction dummy;
    dummy.L = kL; dummy.gpx = kGp; dummy.samples = Vec::Zero(kGp * (kGp / int(kL)));
    REQUIRE_THROWS_AS(module_action(ActionKind::Z_on_right, dummy, big, f),
                      std::invalid_argument);
  }
}

TEST_CASE("pairings") {
  SECTION("psi(f,f)(0) is the squared norm") {
    LineFunction f = gaussian_line(0.2, 0.7);
    SequenceFunction s = pairing_psi(f, f, 2);
    double want = 0;
    for (int i = 0; i < kGp; ++i) want += std::norm(f.samples[i].real());
    want *= f.delta();
    REQUIRE(std::abs(s.at(0).real() - want) < 1e-12);
    REQUIRE(s.at(0).real() > 0);
  }

  SECTION("gaussian closed form") {
    LineFunction f = gaussian_line(0, 1);
    SequenceFunction s = pairing_psi(f, f, 3);
    for (int n = -3; n <= 3; ++n) {
      const double want = std::exp(-pi * n * n / 2.0) / std::sqrt(2.0);
      REQUIRE(std::abs(s.at(n).real() - want) < 1e-8);
    }
  }

  SECTION("symmetry for real inputs") {
    LineFunction f = gaussian_line(0.4, 0.9), g = gaussian_line(-0.2, 0.6);
    SequenceFunction fg = pairing_psi(f, g, 3), gf = pairing_psi(g, f, 3);
    for (int n = -3; n <= 3; ++n) REQUIRE(std::abs(fg.at(n) - gf.at(-n)) < 1e-12);
  }

  SECTION("balanced property") {
    LineFunction f = gaussian_line(0.3, 0.8), g = gaussian_line(-0.1, 0.7);
    SequenceFunction a = SequenceFunction::zero(3);
    a.set(0, 0.8);
    a.set(1, cplx(0.3, 0.1));
    a.set(-2, -0.25);
    CylFunction dummy;
    dummy.L = kL; dummy.gpx = kGp; dummy.samples = Vec::Zero(kGp * (kGp / int(kL)));
    // phi(f.a, g) = phi(f, a.g)
    CylFunction l = pairing_phi(module_action(ActionKind::Z_on_right, dummy, a, f), g);
    CylFunction r = pairing_phi(f, module_action(ActionKind::Z_on_left, dummy, a, g));
    l.samples -= r.samples;
    REQUIRE(l1(l) < 1e-6);

    // psi(f.F, g) = psi(f, F.g)
    CylFunction F = gaussian_cyl(0.8, 1);
    SequenceFunction sl =
        pairing_psi(module_action(ActionKind::C_on_right, F, a, f), g, 3);
    SequenceFunction sr =
        pairing_psi(f, module_action(ActionKind::C_on_left, F, a, g), 3);
    REQUIRE((sl.values - sr.values).cwiseAbs().maxCoeff() < 1e-6);
  }

  SECTION("interchange identities") {
    LineFunction f = gaussian_line(0.2, 0.8), g = gaussian_line(-0.3, 0.7),
                 h = gaussian_line(0.1, 0.9);
    CylFunction dummy;
    dummy.L = kL; dummy.gpx = kGp; dummy.samples = Vec::Zero(kGp * (kGp / int(kL)));
    // phi(f,g).h = f.psi(g,h)
    LineFunction l1v =
        module_action(ActionKind::C_on_left, pairing_phi(f, g), SequenceFunction::zero(1), h);
    LineFunction r1 =
        module_action(ActionKind::Z_on_right, dummy, pairing_psi(g, h, int(kL) / 4), f);
    REQUIRE(line_l1_diff(l1v, r1) < 1e-6);

    // psi(f,g).h = f.phi(g,h)
    LineFunction l2 =
        module_action(ActionKind::Z_on_left, dummy, pairing_psi(f, g, int(kL) / 4), h);
    LineFunction r2 =
        module_action(ActionKind::C_on_right, pairing_phi(g, h), SequenceFunction::zero(1), f);
    REQUIRE(line_l1_diff(l2, r2) < 1e-6);
  }
}

TEST_CASE("approximate identity") {
  SECTION("unit mass") {
    for (double lam : {1.0, 10.0, 100.0}) {
      CylFunction e = approximate_identity(lam, kL, kGp);
      // x-integral at fixed t
      cplx acc{0, 0};
      for (int ix = 0; ix < kGp; ++ix) acc += e.samples[std::int64_t(ix) * e.gpt()];
      acc *= e.delta();
      REQUIRE(std::abs(acc - cplx(1, 0)) < 1e-10);
    }
  }
  SECTION("strictly improving convergence on a fixed Gaussian") {
    LineFunction f = gaussian_line(0.1, 0.9);
    CylFunction dummy;
    double prev = 1e300;
    for (double lam : {1.0, 10.0, 100.0}) {
      CylFunction e = approximate_identity(lam, kL, kGp);
      LineFunction ef = module_action(ActionKind::C_on_left, e, SequenceFunction::zero(1), f);
      const double err = line_l1_diff(ef, f);
      REQUIRE(err < prev);
      prev = err;
    }
  }
  SECTION("lambda must be positive") {
    REQUIRE_THROWS_AS(approximate_identity(0.0, kL, kGp), std::invalid_argument);
  }
}

TEST_CASE("surjectivity witness") {
  SECTION("partition of unity sums to one") {
    LineFunction f = partition_of_unity(kL, kGp);
    const int ppu = f.per_unit();
    for (int it = 0; it < ppu; ++it) {
      double s = 0;
      for (int n = -int(kL); n <= int(kL); ++n) {
        const int j = it - n * ppu + kGp / 2;
        if (j >= 0 && j < kGp) s += f.samples[j].real();
      }
      REQUIRE(std::abs(s - 1.0) < 1e-10);
    }
  }

  SECTION("phi(H) reproduces F") {
    CylFunction F = approximate_identity(10.0, kL, kGp);
    WitnessReport rep = surjectivity_witness(F);
    REQUIRE(rep.partition_defect < 1e-10);
    REQUIRE(rep.residual_l1 < 1e-6);
    REQUIRE(rep.rank >= 1);

    CylFunction G = gaussian_cyl(0.8, 1);
    WitnessReport rep2 = surjectivity_witness(G);
    REQUIRE(rep2.residual_l1 < 1e-6 * std::max(1.0, l1(G)));
  }

  SECTION("psi surjectivity: the unit-interval witness pairs to the delta") {
    // supp f0 in (0,1), integral of |f0|^2 equal to 1
    LineFunction f0 = LineFunction::sample(kL, kGp, [](double x) {
      const double u = 2 * (x - 0.5);  // support (0,1)
      return (std::abs(u) < 1) ? std::exp(-1.0 / (1 - u * u)) : 0.0;
    });
    double nrm = 0;
    for (int i = 0; i < kGp; ++i) nrm += std::norm(f0.samples[i]);
    f0.samples /= std::sqrt(nrm * f0.delta());
    SequenceFunction s = pairing_psi(f0, f0, 3);
    REQUIRE(std::abs(s.at(0) - cplx(1, 0)) < 1e-8);
    for (int n = 1; n <= 3; ++n) {
      REQUIRE(std::abs(s.at(n)) < 1e-10);
      REQUIRE(std::abs(s.at(-n)) < 1e-10);
    }
  }
}

TEST_CASE("seminorms") {
  SECTION("q^0 of the delta is one") {
    SequenceFunction d0 = SequenceFunction::zero(2);
    d0.set(0, 1.0);
    REQUIRE(seminorm_q(d0, 0) == Catch::Approx(1.0));
  }

  SECTION("nu^{0,0} is the L1 norm") {
    LineFunction f = gaussian_line(0.2, 0.8);
    REQUIRE(seminorm_nu(f, 0, 0) == Catch::Approx(l1(f)).margin(1e-12));
  }

  SECTION("first seminorm derivative matches the closed form") {
    LineFunction f = gaussian_line(0, 1);
    // d/dx e^{-pi x^2} = -2 pi x e^{-pi x^2}; nu^{0,1} = int |.| dx
    double want = 0;
    for (int i = 0; i < kGp; ++i) {
      const double x = f.position(i);
      want += std::abs(-2 * pi * x * std::exp(-pi * x * x));
    }
    want *= f.delta();
    REQUIRE(std::abs(seminorm_nu(f, 0, 1) - want) < 1e-6);
  }

  SECTION("submultiplicativity of p^{0,0,0} on random Gaussian pairs") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> u(0.4, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
      CylFunction F = gaussian_cyl(u(rng), trial % 3), G = gaussian_cyl(u(rng), (trial + 1) % 3);
      const double pf = seminorm_p(F, 0, 0, 0), pg = seminorm_p(G, 0, 0, 0);
      const double pfg = seminorm_p(appendix_product(F, G), 0, 0, 0);
      REQUIRE(pfg <= pf * pg * (1 + 1e-10));
    }
  }

  SECTION("invalid orders") {
    LineFunction f = gaussian_line();
    REQUIRE_THROWS_AS(seminorm_nu(f, -1, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(seminorm_nu(f, 0, 9), std::invalid_argument);
  }
}
