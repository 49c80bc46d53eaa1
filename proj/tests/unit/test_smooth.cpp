#include <gtest/gtest.h>

#include <numeric>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "tsrl/arith.hpp"
#include "tsrl/errors.hpp"
#include "tsrl/smooth.hpp"

using namespace tsrl;
using boost::math::quadrature::gauss;
using ld = long double;

namespace {

constexpr double kPi = std::numbers::pi;

// Test-side reference implementations, sharing nothing with the library.
ld rho_ref(ld x) { return (std::fabs(x) < 1) ? std::exp(1 / (x * x - 1)) : 0; }

// Composite 30-point Gauss-Legendre on 8 equal panels.
double gk(const std::function<double(double)>& f, double a, double b) {
  if (!(a < b)) return 0.0;
  double s = 0, h = (b - a) / 8;
  for (int i = 0; i < 8; ++i) s += gauss<double, 30>::integrate(f, a + i * h, a + (i + 1) * h);
  return s;
}

double rho_cum_ref(double u) {
  u = std::clamp(u, -1.0, 1.0);
  return gk([](double s) { return static_cast<double>(rho_ref(s)); }, -1.0, u);
}

// 1/c * integral_{x-b}^{x-a} rho(2t/delta) dt, via the cumulative integral of rho.
double sigma_ref(double a, double b, double delta, double x) {
  return (rho_cum_ref(2 * (x - a) / delta) - rho_cum_ref(2 * (x - b) / delta)) / rho_cum_ref(1.0);
}

double psi_ref(double x) { return sigma_ref(0.75, 2.25, 0.5, x); }

std::complex<double> psi_hat_ref(double lambda) {
  auto part = [&](auto trig) {
    double s = 0;
    // panels keep the oscillation per panel bounded
    int panels = 8 + static_cast<int>(std::abs(lambda));
    for (int i = 0; i < panels; ++i) {
      double lo = 0.5 + 2.0 * i / panels, hi = 0.5 + 2.0 * (i + 1) / panels;
      s += gk([&](double x) { return psi_ref(x) * trig(2 * kPi * x * lambda); }, lo, hi);
    }
    return s;
  };
  return {part([](double v) { return std::cos(v); }), -part([](double v) { return std::sin(v); })};
}

ld fd5(const std::function<ld(ld)>& f, ld x, ld h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fact(unsigned j) { return std::tgamma(j + 1.0); }

}  // namespace

TEST(Rho, Examples) {
  EXPECT_NEAR(rho(0), std::exp(-1.0), 1e-16);
  EXPECT_EQ(rho(1.5), 0.0);
  EXPECT_EQ(rho(1.0), 0.0);
  EXPECT_EQ(rho(-1.0), 0.0);
  EXPECT_EQ(rho_deriv(0, 1), 0.0);
  try {
    rho_deriv(0.1, 13);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DerivOrderTooHigh);
  }
  EXPECT_NO_THROW(rho_deriv(0.1, 12));
}

TEST(Rho, MatchesReferenceAndIntegral) {
  for (double x = -1.2; x <= 1.2; x += 0.01) EXPECT_NEAR(rho(x), static_cast<double>(rho_ref(x)), 1e-16);
  EXPECT_NEAR(rho_integral(), rho_cum_ref(1.0), 1e-14);
  EXPECT_NEAR(rho_integral(), 0.443994, 1e-6);
  for (double u : {-0.9, -0.3, 0.0, 0.42, 0.99}) EXPECT_NEAR(rho_cumulative(u), rho_cum_ref(u), 1e-14);
}

TEST(Rho, DerivativeChainAgainstFiniteDifferences) {
  // order 1 against the reference function, each higher order against the one below it
  for (double x = -0.8; x <= 0.8; x += 0.05) {
    ld want = fd5([](ld t) { return rho_ref(t); }, x, 1e-3L);
    EXPECT_NEAR(rho_deriv(x, 1), static_cast<double>(want), 1e-9);
    for (unsigned j = 2; j <= 8; ++j) {
      ld d = fd5([j](ld t) { return static_cast<ld>(rho_deriv(static_cast<double>(t), j - 1)); }, x, 1e-4L);
      double scale = std::pow(2.0, j) * fact(j);
      EXPECT_NEAR(rho_deriv(x, j), static_cast<double>(d), 1e-6 * scale * scale) << x << " " << j;
    }
  }
}

TEST(Rho, DerivativeBoundGridProperty) {
  for (unsigned j = 0; j <= 8; ++j) {
    double bound = std::pow(std::pow(2.0, j) * fact(j), 2);
    for (int i = 0; i < 1000; ++i) {
      double x = -1.0 + 2.0 * (i + 0.5) / 1000;
      ASSERT_LE(std::abs(rho_deriv(x, j)), bound) << j << " " << x;
    }
    EXPECT_EQ(rho_deriv(1.0, j), 0.0);
    EXPECT_EQ(rho_deriv(-3.0, j), 0.0);
  }
}

TEST(Bump, Preconditions) {
  EXPECT_THROW(BumpSpec(0, 1, 0), Error);
  EXPECT_THROW(BumpSpec(0, 1, 1), Error);
  EXPECT_THROW(BumpSpec(0, 1, -0.1), Error);
  EXPECT_THROW(f_delta_spec(0.5), Error);
  BumpSpec s(0, 1, 0.3);
  EXPECT_NEAR(s.normalization(), 0.15 * rho_integral(), 1e-15);
}

TEST(Sigma, Examples) {
  auto ps = psi_spec();
  EXPECT_EQ(ps.a(), 0.75);
  EXPECT_EQ(ps.b(), 2.25);
  EXPECT_EQ(ps.delta(), 0.5);
  EXPECT_NEAR(sigma(ps, 1.5), 1.0, 1e-12);
  EXPECT_EQ(sigma(ps, 0.3), 0.0);
  double mid = sigma(ps, 0.75);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
  EXPECT_NEAR(mid, 0.5, 1e-12);  // by symmetry of rho
}

TEST(Sigma, ThreeCaseTableProperty) {
  std::mt19937_64 rng(0x2A);
  std::vector<BumpSpec> specs{psi_spec(), f_delta_spec(0.2), f_delta_spec(0.05), f_delta_spec(0.01)};
  for (const auto& s : specs) {
    std::uniform_real_distribution<double> U(s.a() - s.delta(), s.b() + s.delta());
    for (int i = 0; i < 1000; ++i) {
      double x = U(rng);
      double v = sigma(s, x);
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      if (x >= s.a() + s.delta() / 2 && x <= s.b() - s.delta() / 2) {
        ASSERT_NEAR(v, 1.0, 1e-10);
      }
      if (x <= s.support_lo() || x >= s.support_hi()) {
        ASSERT_EQ(v, 0.0);
      }
      if (i % 10 == 0) {
        ASSERT_NEAR(v, sigma_ref(s.a(), s.b(), s.delta(), x), 1e-10) << x;
      }
    }
  }
}

TEST(Sigma, DerivativeMatchesFiniteDifference) {
  auto s = f_delta_spec(0.1);
  for (double x : {0.12, 0.15, 0.18, 1.02, 1.05}) {
    ld d = fd5([&](ld t) { return static_cast<ld>(sigma(s, static_cast<double>(t))); }, x, 1e-4L);
    EXPECT_NEAR(sigma_deriv(s, x), static_cast<double>(d), 1e-7);
  }
  EXPECT_NEAR(psi_deriv(0.75), 2.0 / 0.5 * rho(0) / (2 * rho_integral()) * 2, 1e-12);
}

TEST(PsiHat, Examples) {
  auto z = psi_hat(0);
  EXPECT_GT(z.value.real(), 1.0);
  EXPECT_LT(z.value.real(), 2.0);
  EXPECT_EQ(z.value.imag(), 0.0);
  EXPECT_GE(z.abs_error_estimate, 0.0);
  for (double l : {0.3, 1.0, 7.25, 100.0}) {
    auto p = psi_hat(l).value, m = psi_hat(-l).value;
    EXPECT_NEAR(p.real(), m.real(), 1e-13);
    EXPECT_NEAR(p.imag(), -m.imag(), 1e-13);
  }
  EXPECT_LE(std::abs(psi_hat(100).value), 1e3 * std::exp(-5.0));
  EXPECT_THROW(psi_hat(1e4 + 1), Error);
}

TEST(PsiHat, MatchesDirectQuadratureOracle) {
  for (double l : {0.0, 0.37, 1.0, 2.5, 9.0}) {
    auto want = psi_hat_ref(l);
    EXPECT_LT(std::abs(psi_hat(l).value - want), 1e-10) << l;
  }
}

TEST(PsiHat, DecayEnvelopeProperty) {
  double sup = 0;
  for (int l = 1; l <= 400; ++l) sup = std::max(sup, std::abs(psi_hat(l).value) * std::exp(std::sqrt(l) / 2.0));
  EXPECT_TRUE(std::isfinite(sup));
  EXPECT_LE(sup, 1e3);
}

TEST(PsiHat, DerivativesProperty) {
  for (double x : {0.4, 3.3}) {
    ld d = fd5([](ld t) { return static_cast<ld>(psi_hat(static_cast<double>(t)).value.real()); }, x, 1e-3L);
    EXPECT_NEAR(psi_hat_deriv(1, x).value.real(), static_cast<double>(d), 1e-8);
  }
  for (unsigned k = 1; k <= 3; ++k) {
    double sup = 0;
    for (double x = 1; x <= 200; x += 7) sup = std::max(sup, std::abs(psi_hat_deriv(k, x).value) * std::pow(x, k));
    EXPECT_TRUE(std::isfinite(sup));
    EXPECT_LT(sup, 1e4) << k;
  }
}

TEST(FDelta, Examples) {
  EXPECT_EQ(f_delta(0.1, 0.5), 1.0);
  EXPECT_EQ(f_delta(0.1, 0.05), 0.0);
  EXPECT_EQ(f_delta(0.1, 1.2), 0.0);
  EXPECT_THROW(f_delta(0.6, 0.5), Error);
  EXPECT_THROW(F_delta(0.0, 1.0), Error);
}

TEST(FDelta, MellinMatchesOracle) {
  for (double delta : {0.1, 0.3})
    for (double t : {0.0, 1.0, 10.0, 33.0}) {
      auto f = [&](double u) { return sigma_ref(1.5 * delta, 1 + delta / 2, delta, u); };
      double re = 0, im = 0;
      for (int i = 0; i < 40; ++i) {
        double lo = delta + i / 40.0, hi = delta + (i + 1) / 40.0;
        re += gk([&](double u) { return f(u) * std::cos(t * std::log(u)) / u; }, lo, hi);
        im += gk([&](double u) { return f(u) * std::sin(t * std::log(u)) / u; }, lo, hi);
      }
      auto got = F_delta(delta, t).value;
      EXPECT_LT(std::abs(got - std::complex<double>(re, im)), 1e-9) << delta << " " << t;
    }
}

TEST(FDelta, InverseSquareBoundProperty) {
  for (double delta : {0.01, 0.1}) {
    double sup = 0;
    for (double t = 1; t <= 200; t += 9) sup = std::max(sup, std::abs(F_delta(delta, t).value) * delta * t * t);
    EXPECT_LT(sup, 10.0) << delta;
  }
}

TEST(Poisson, IdentityToHighAccuracy) {
  for (double H : {10.0, 100.0})
    for (double x : {0.0, 0.3}) {
      auto r = poisson_identity_check(H, x, 3);
      EXPECT_LE(std::abs(r.diff), 1e-8) << H << " " << x;
      double lhs = 0;
      for (long n = -1; n <= 3 * static_cast<long>(H); ++n) lhs += psi_ref((n + x) / H);
      EXPECT_NEAR(r.lhs, lhs, 1e-9 * H);
    }
}

TEST(Lemma7, ProgressionExamples) {
  long H = lemma7_min_H(2, 100);
  EXPECT_GE(static_cast<double>(H), 5 * 2 / 100.0 * std::pow(std::log(100.0), 4));
  EXPECT_LT(static_cast<double>(H - 1), 5 * 2 / 100.0 * std::pow(std::log(100.0), 4));
  auto r = poisson_check_progression(2, 1, 100, H);
  EXPECT_LE(std::abs(r.diff), 1e-4);
  double lhs = 0;
  for (long m = 1; m < 250; m += 2) lhs += psi_ref(m / 100.0);
  EXPECT_NEAR(r.lhs, lhs, 1e-9);

  auto small = poisson_check_progression(3, 0, 100, lemma7_min_H(3, 100));
  auto big = poisson_check_progression(3, 0, 1000, lemma7_min_H(3, 1000));
  EXPECT_LE(std::abs(big.diff), std::abs(small.diff));
  EXPECT_LE(std::abs(small.diff), 1e-8);

  auto coarse = poisson_check_progression(2, 1, 10, lemma7_min_H(2, 10));
  EXPECT_LT(std::abs(r.diff), std::abs(coarse.diff));
}

TEST(Lemma7, Preconditions) {
  EXPECT_THROW(poisson_check_progression(1, 0, 100, 50), Error);
  EXPECT_THROW(poisson_check_progression(5, 5, 100, 50), Error);
  EXPECT_THROW(poisson_check_progression(2, 1, 100, 1), Error);
  EXPECT_THROW(poisson_check_progression(1000, 0, 2.0, 1000), Error);
}

TEST(Lemma7, CoprimeVariantProperty) {
  for (long q = 1; q <= 40; ++q) {
    auto r = poisson_check_coprime(q, 300);
    EXPECT_NEAR(r.rhs, euler_phi(static_cast<u64>(q)) * 300 * 1.5 / q, 1e-9);
    EXPECT_LE(std::abs(r.diff), tau_of(static_cast<u64>(q)) * std::pow(std::log(300.0), 2)) << q;
  }
}

TEST(Mellin, Examples) {
  auto m = mellin_inversion_check(0.1, 1000, 0.5);
  EXPECT_EQ(m.f_exact, 1.0);
  EXPECT_LE(std::abs(m.diff), 1e-2);
  auto out = mellin_inversion_check(0.1, 100, 3.0);
  EXPECT_EQ(out.f_exact, 0.0);
  EXPECT_LE(std::abs(out.f_reconstructed), 1 / (0.1 * 100));
  EXPECT_THROW(mellin_inversion_check(0.1, 5, 0.5), Error);
}

TEST(Mellin, TruncationEnvelopeHalvesProperty) {
  auto envelope = [](double T0) {
    double e = 0;
    for (int i = 0; i < 8; ++i) e = std::max(e, std::abs(mellin_inversion_check(0.1, T0 * std::pow(2.0, i / 8.0), 0.5).diff));
    return e;
  };
  EXPECT_LE(envelope(200), 0.5 * envelope(100));
}
