#include <gtest/gtest.h>

#include <numeric>

#include <cmath>

#include "tsrl/arith.hpp"
#include "tsrl/errors.hpp"
#include "tsrl/series.hpp"

using namespace tsrl;

namespace {

// Exact Q(x) from per-n factorization, no sieve.
Rational naive_q(u64 x) {
  Rational s = 0;
  for (u64 n = 1; n <= x; ++n) {
    auto den = h_of(n + 1);
    if (den) s += Rational(h_of(n), den);
  }
  s.canonicalize();
  return s;
}

// Direct triple loop over d, n for the progression-minus-expected sum.
double naive_qerr2(u64 x, double A) {
  double L = std::log(static_cast<double>(x));
  double lo = std::sqrt(static_cast<double>(x)) * std::pow(L, -A);
  double hi = std::sqrt(static_cast<double>(x)) * std::pow(L, A);
  long double total = 0;
  for (u64 d = 1; d <= x; ++d) {
    double dd = static_cast<double>(d);
    if (!(dd > lo && dd <= hi)) continue;
    int c = chi4(static_cast<i64>(d));
    if (!c) continue;
    long double prog = 0, coprime = 0;
    for (u64 n = 1; n <= x; ++n) {
      auto h = h_of(n);
      if (!h) continue;
      if (n % d == 1 % d) prog += 1.0L / h;
      if (std::gcd(n, d) == 1) coprime += 1.0L / h;
    }
    total += c * (prog - coprime / static_cast<long double>(euler_phi(d)));
  }
  return static_cast<double>(total);
}

}  // namespace

TEST(Q, Examples) {
  EXPECT_EQ(*q_of_x(1, true).exact, Rational(1));
  EXPECT_EQ(*q_of_x(4, true).exact, Rational(3, 2));
  EXPECT_EQ(*q_of_x(10, true).exact, Rational(3));
  EXPECT_DOUBLE_EQ(q_of_x(10).value, 3.0);
  EXPECT_EQ(q_of_x(0, true).value, 0.0);
}

TEST(Q, TermsUsedRule) {
  // n <= 4 with h(n+1) != 0: n = 1, 3, 4 (n = 3 contributes 0 but counts)
  EXPECT_EQ(q_of_x(4).terms_used, 3u);
  for (u64 x : {1ULL, 10ULL, 977ULL, 5000ULL}) {
    u64 c = 0;
    for (u64 n = 1; n <= x; ++n) c += h_of(n + 1) != 0;
    EXPECT_EQ(q_of_x(x).terms_used, c);
  }
}

TEST(Q, OracleEquivalenceExact) {
  for (u64 x : {100ULL, 2345ULL, 100'000ULL}) EXPECT_EQ(*q_of_x(x, true).exact, naive_q(x)) << x;
}

TEST(Q, FloatFidelity) {
  auto p = q_of_x(100'000, true);
  double exact = p.exact->get_d();
  EXPECT_LE(std::abs(p.value - exact), 1e-9 * std::abs(exact));
  auto f = q_of_x(100'000);
  EXPECT_LE(std::abs(f.value - exact), 1e-12 * std::abs(exact));
}

TEST(Q, RangeLimits) {
  EXPECT_THROW(q_of_x(kExactSeriesMax + 1, true), Error);
  try {
    q_of_x(kFloatSeriesMax + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RangeTooLarge);
  }
}

TEST(Q, DeterministicAcrossThreadsAndSegments) {
  auto ref = q_of_x(1'000'000, false, ScanOptions{1, 0});
  for (ScanOptions o : {ScanOptions{4, 0}, ScanOptions{8, 1 << 12}, ScanOptions{3, 99'991}}) {
    auto p = q_of_x(1'000'000, false, o);
    EXPECT_EQ(p.value, ref.value);
    EXPECT_EQ(p.value_dd.hi, ref.value_dd.hi);
    EXPECT_EQ(p.value_dd.lo, ref.value_dd.lo);
    EXPECT_EQ(p.terms_used, ref.terms_used);
  }
}

TEST(Q, ScanCheckpointsMatchOracle) {
  std::vector<u64> xs{10, 1000, 54'321};
  auto pts = scan_prefix_sums(xs, ScanChannels{true, true, false}, ScanOptions{2, 1 << 10});
  ASSERT_EQ(pts.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(pts[i].x, xs[i]);
    double want = naive_q(xs[i]).get_d();
    EXPECT_NEAR(pts[i].q.value(), want, 1e-12 * want);
    long double s = 0;
    for (u64 n = 1; n <= xs[i]; ++n) s += static_cast<long double>(tau_of(n)) / tau_of(n + 1);
    EXPECT_NEAR(pts[i].s.value(), static_cast<double>(s), 1e-12 * static_cast<double>(s));
  }
}

TEST(S, Examples) {
  EXPECT_DOUBLE_EQ(s_of_x(1).value, 0.5);
  EXPECT_DOUBLE_EQ(s_of_x(2).value, 1.5);
  EXPECT_NEAR(s_of_x(3).value, 1.5 + 2.0 / 3.0, 1e-15);
}

TEST(S, MatchesDivisorCountOracle) {
  long double s = 0;
  for (u64 n = 1; n <= 50'000; ++n) s += static_cast<long double>(tau_of(n)) / tau_of(n + 1);
  EXPECT_NEAR(s_of_x(50'000).value, static_cast<double>(s), 1e-9);
}

TEST(Q, NormalizedDefinition) {
  EXPECT_NEAR(q_normalized(2.0, 100), 2.0 * std::pow(std::log(100.0), 0.75) / 100.0, 1e-16);
}

TEST(Decomposition, Examples) {
  auto one = q_decomposition(1, 1.0);
  EXPECT_EQ(one.q1 + one.q2 + one.q3, Rational(1));
  auto ten = q_decomposition(10, 1.0);
  EXPECT_EQ(ten.q1 + ten.q2 + ten.q3, Rational(3));
}

TEST(Decomposition, ExactIdentityProperty) {
  Rational q = naive_q(10'000);
  for (double A : {0.5, 1.0, 2.0, 5.0}) {
    auto d = q_decomposition(10'000, A);
    EXPECT_EQ(d.q1 + d.q2 + d.q3, q) << A;
  }
}

TEST(Decomposition, ComponentsMatchDirectDivisorSplit) {
  const u64 x = 3000;
  const double A = 1.0;
  auto dec = q_decomposition(x, A);
  double L = std::log(3000.0), lo = std::sqrt(3000.0) / L, hi = std::sqrt(3000.0) * L;
  Rational parts[3] = {0, 0, 0};
  for (u64 n = 1; n <= x; ++n) {
    auto den = h_of(n + 1);
    if (!den) continue;
    for (u64 d = 1; d <= n; ++d) {
      if (n % d) continue;
      int c = chi4(static_cast<i64>(d));
      if (!c) continue;
      int cls = d <= lo ? 0 : (d <= hi ? 1 : 2);
      parts[cls] += Rational(c, den);
    }
  }
  EXPECT_EQ(dec.q1, parts[0]);
  EXPECT_EQ(dec.q2, parts[1]);
  EXPECT_EQ(dec.q3, parts[2]);
}

TEST(Qerr2, Examples) {
  EXPECT_EQ(qerr2_direct(1, 1.0), 0.0);
  double v = qerr2_direct(10'000, 2.0);
  EXPECT_TRUE(std::isfinite(v));
}

TEST(Qerr2, MatchesNaiveOracle) {
  for (auto [x, A] : {std::pair<u64, double>{600, 0.5}, {2000, 1.0}, {1500, 0.25}}) {
    double want = naive_qerr2(x, A);
    EXPECT_NEAR(qerr2_direct(x, A), want, 1e-9 * (1 + std::abs(want))) << x << " " << A;
  }
}

TEST(Qerr2, Limits) {
  EXPECT_THROW(qerr2_direct(kDivisorSeriesMax + 1, 1.0), Error);
  EXPECT_THROW(q_decomposition(kDivisorSeriesMax + 1, 1.0), Error);
}
