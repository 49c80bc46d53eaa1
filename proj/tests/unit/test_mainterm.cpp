#include <gtest/gtest.h>

#include <numeric>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tsrl/arith.hpp"
#include "tsrl/constants.hpp"
#include "tsrl/errors.hpp"
#include "tsrl/mainterm.hpp"

using namespace tsrl;

namespace {

// E(n) from trial division, exact.
Rational naive_E(u64 n) {
  Rational e = 1;
  for (u64 p = 3; p <= n; p += 2) {
    if (n % p || !is_prime(p)) continue;
    mpz_class P = p;
    if (p % 4 == 1) {
      e *= Rational((P - 1) * (P - 1), P * P - P + 1);
    } else {
      e *= Rational(P * P - 1, P * P - P - 1);
    }
  }
  e.canonicalize();
  return e;
}

Rational naive_H(u64 x, bool odd_only) {
  Rational s = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (odd_only && n % 2 == 0) continue;
    auto h = h_of(n);
    if (h) s += naive_E(n) / h;
  }
  return s;
}

}  // namespace

TEST(E, Examples) {
  EXPECT_EQ(E_of(1), Rational(1));
  EXPECT_EQ(E_of(5), Rational(16, 21));
  EXPECT_EQ(E_of(3), Rational(8, 5));
  EXPECT_EQ(E_of(2 * 45), E_of(45));
}

TEST(E, MatchesTrialDivision) {
  for (u64 n = 1; n <= 3000; ++n) ASSERT_EQ(E_of(n), naive_E(n)) << n;
}

TEST(E, MultiplicativeOnCoprimePairsProperty) {
  std::mt19937_64 rng(0x2A);
  int done = 0;
  while (done < 10'000) {
    u64 m = rng() % 1'000'000 + 1, n = rng() % 1'000'000 + 1;
    if (std::gcd(m, n) != 1) continue;
    ++done;
    ASSERT_EQ(E_of(m * n), E_of(m) * E_of(n));
  }
}

TEST(H, Examples) {
  EXPECT_EQ(H_of(1), 1.0);
  EXPECT_EQ(H_of(2), 2.0);
  EXPECT_EQ(H_of(0.5), 0.0);
  EXPECT_EQ(H_of(2.9), H_of(2));
}

TEST(H, MatchesExactOracle) {
  for (u64 x : {10ULL, 777ULL, 5000ULL}) {
    for (bool odd : {false, true}) {
      double want = naive_H(x, odd).get_d();
      EXPECT_NEAR(H_of(static_cast<double>(x), odd), want, 1e-13 * want) << x;
    }
  }
}

TEST(H, OddPartIdentity) {
  for (u64 x : {1000ULL, 10'000ULL, 1'000'000ULL}) {
    double X = static_cast<double>(x);
    double lhs = H_of(X, true), rhs = H_of(X) - H_of(X / 2);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * lhs) << x;
    EXPECT_GE(H_of(X), H_of(X / 2));
  }
}

TEST(QMT, Examples) {
  const double pre = std::numbers::pi * c_constant().value / 4;
  EXPECT_NEAR(q_mt_prefactor(), pre, 1e-15);
  double want = pre * Rational(naive_H(4, false) + naive_H(2, false) - 2 * naive_H(1, false)).get_d();
  EXPECT_NEAR(q_mt(4), want, 1e-14);
  // H(1/2) = H(1/4) = 0 under the floor convention
  EXPECT_NEAR(q_mt(1), pre, 1e-15);
  EXPECT_GE(q_mt_interval_halfwidth(1e4), 0.0);
}

TEST(QMT, MonotoneInX) {
  double prev = 0;
  for (double x : {1e3, 3e3, 1e4, 3e4, 1e5, 3e5, 1e6}) {
    double v = q_mt(x);
    EXPECT_GT(v, prev) << x;
    prev = v;
  }
}

TEST(HAsymptotic, FormulaAndScaling) {
  EXPECT_THROW(h_asymptotic(2.5), Error);
  const double k = g_at_one().value / gamma_quarter();
  EXPECT_NEAR(h_asymptotic(1e6), k * 1e6 / std::pow(std::log(1e6), 0.75), 1e-9);
  for (double x : {10.0, 1e4, 1e8}) {
    double want = 2 * std::pow(std::log(x) / std::log(2 * x), 0.75);
    EXPECT_NEAR(h_asymptotic(2 * x) / h_asymptotic(x), want, 1e-13);
  }
  double big = h_asymptotic(1e8);
  EXPECT_TRUE(std::isfinite(big) && big > 0);
}

TEST(Reports, ConsistentWithSingleEvaluations) {
  auto rows = main_term_reports({1000, 54'321, 200'000});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    double X = static_cast<double>(r.x);
    EXPECT_NEAR(r.H, H_of(X), 1e-12 * r.H);
    EXPECT_NEAR(r.H_half, H_of(X / 2), 1e-12 * r.H);
    EXPECT_NEAR(r.H_quarter, H_of(X / 4), 1e-12 * r.H);
    EXPECT_NEAR(r.q_mt, q_mt(X), 1e-12 * r.q_mt);
    EXPECT_NEAR(r.q_direct, q_of_x(r.x).value, 1e-12 * r.q_direct);
    EXPECT_DOUBLE_EQ(r.ratio_q, r.q_direct / r.q_mt);
    EXPECT_DOUBLE_EQ(r.ratio_h, r.H / r.h_asymptotic);
  }
  std::ostringstream os;
  write_main_term_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "x,Q,Q_MT,ratio,H,H_asym,ratio_H");
}

TEST(Reports, TrendsAtModerateX) {
  auto rows = main_term_reports({10'000, 100'000, 1'000'000});
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::abs(rows[i].ratio_h - 1), std::abs(rows[i - 1].ratio_h - 1));
  EXPECT_LT(std::abs(rows[2].ratio_q - 1), std::abs(rows[0].ratio_q - 1));
}
