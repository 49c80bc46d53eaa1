#include <gtest/gtest.h>

#include <numeric>

#include <cmath>
#include <numbers>

#include "tsrl/arith.hpp"
#include "tsrl/characters.hpp"
#include "tsrl/errors.hpp"

using namespace tsrl;

namespace {

// Smallest d | q such that chi(n) depends only on n mod d among units: brute-force induction.
u64 brute_conductor(const DirichletCharacter& chi) {
  const u64 q = chi.modulus();
  for (u64 d = 1; d <= q; ++d) {
    if (q % d) continue;
    bool induced = true;
    for (u64 n = 1; n < q && induced; ++n) {
      if (std::gcd(n, q) != 1 || n % d != 1 % d) continue;
      if (std::abs(chi(static_cast<i64>(n)) - 1.0) > 1e-9) induced = false;
    }
    if (induced) return d;
  }
  return q;
}

DirichletCharacter legendre(u64 p) {
  return character_from_function(p, [p](u64 n) -> std::optional<Angle> {
    if (n % p == 0) return std::nullopt;
    bool residue = false;
    for (u64 x = 1; x < p; ++x) residue |= (x * x) % p == n % p;
    return make_angle(residue ? 0 : 1, 2);
  });
}

}  // namespace

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate_characters(5).size(), 4u);
  auto four = enumerate_characters(4);
  ASSERT_EQ(four.size(), 2u);
  EXPECT_TRUE(four[0].is_principal());
  for (i64 n = 0; n < 40; ++n) EXPECT_NEAR(std::abs(four[1](n) - static_cast<double>(chi4(n))), 0.0, 1e-15);
  auto one = enumerate_characters(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0](17), 1.0);
  EXPECT_THROW(enumerate_characters(100'001), Error);
}

TEST(Enumerate, CountAndAxiomsProperty) {
  for (u64 q = 1; q <= 120; ++q) {
    auto chars = enumerate_characters(q);
    ASSERT_EQ(chars.size(), euler_phi(q));
    EXPECT_TRUE(chars[0].is_principal());
    for (const auto& chi : chars) {
      for (i64 n = 0; n < static_cast<i64>(2 * q); ++n) {
        bool unit = std::gcd(static_cast<u64>(n), q) == 1;
        EXPECT_EQ(chi.angle(n).has_value(), unit);
        EXPECT_EQ(chi.angle(n), chi.angle(n + static_cast<i64>(q)));
      }
      for (i64 m = 1; m < static_cast<i64>(q); ++m)
        for (i64 n = 1; n < static_cast<i64>(q); ++n) {
          auto am = chi.angle(m), an = chi.angle(n), amn = chi.angle(m * n);
          if (am && an) {
            ASSERT_EQ(*amn, *am + *an);
          }
        }
    }
  }
}

TEST(Enumerate, OrthogonalityProperty) {
  for (u64 q = 1; q <= 200; ++q) {
    auto chars = enumerate_characters(q);
    for (i64 n = 0; n < static_cast<i64>(q); ++n) {
      std::complex<double> s = 0;
      for (const auto& chi : chars) s += chi(n);
      double want = (n % static_cast<i64>(q) == 1 % static_cast<i64>(q)) ? static_cast<double>(euler_phi(q)) : 0.0;
      ASSERT_LT(std::abs(s - want), 1e-9) << q << " " << n;
    }
  }
}

TEST(Conductor, Examples) {
  auto twelve = enumerate_characters(12);
  EXPECT_EQ(conductor(twelve[0]), 1u);
  auto chi4_mod12 = character_from_function(12, [](u64 n) -> std::optional<Angle> {
    if (std::gcd(n, u64{12}) != 1) return std::nullopt;
    return make_angle(chi4(static_cast<i64>(n)) == 1 ? 0 : 1, 2);
  });
  EXPECT_EQ(conductor(chi4_mod12), 4u);
  EXPECT_EQ(brute_conductor(chi4_mod12), 4u);
  auto l7 = legendre(7);
  EXPECT_EQ(conductor(l7), 7u);
  EXPECT_TRUE(is_primitive(l7));
}

TEST(Conductor, MatchesBruteForceProperty) {
  for (u64 q = 1; q <= 64; ++q)
    for (const auto& chi : enumerate_characters(q)) ASSERT_EQ(conductor(chi), brute_conductor(chi)) << q;
}

TEST(Conductor, InducerAgreesOnUnits) {
  for (u64 q = 2; q <= 90; ++q)
    for (const auto& chi : enumerate_characters(q)) {
      auto prim = primitive_inducer(chi);
      EXPECT_EQ(prim.modulus(), conductor(chi));
      for (i64 n = 1; n < static_cast<i64>(q); ++n)
        if (std::gcd(static_cast<u64>(n), q) == 1) {
          ASSERT_LT(std::abs(prim(n) - chi(n)), 1e-12);
        }
    }
}

TEST(TimesChi4, Examples) {
  EXPECT_EQ(times_chi4(legendre(3)).second, 12u);
  for (u64 d : {12ULL, 16ULL}) {
    int seen = 0;
    for (const auto& chi : enumerate_characters(d)) {
      if (!is_primitive(chi)) continue;
      ++seen;
      EXPECT_EQ(times_chi4(chi).second, d == 12 ? 3u : 16u);
    }
    EXPECT_GT(seen, 0);
  }
  try {
    times_chi4(enumerate_characters(12)[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotPrimitive);
  }
}

TEST(TimesChi4, ConductorTableAgainstBruteForce) {
  for (u64 d = 3; d <= 300; ++d)
    for (const auto& chi : enumerate_characters(d)) {
      if (!is_primitive(chi)) continue;
      auto [prod, f] = times_chi4(chi);
      EXPECT_EQ(prod.modulus(), std::lcm(d, u64{4}));
      EXPECT_EQ(f, times_chi4_conductor_formula(d)) << d;
      if (d <= 60) {
        EXPECT_EQ(f, brute_conductor(prod)) << d;
      }
      for (i64 n = 1; n < static_cast<i64>(prod.modulus()); ++n) {
        auto want = chi(n) * static_cast<double>(chi4(n));
        ASSERT_LT(std::abs(prod(n) - want), 1e-12);
      }
    }
}

TEST(TimesChi4, DistinctnessProperty) {
  for (u64 q = 1; q <= 200; ++q) {
    auto chars = enumerate_characters(q);
    const i64 L = static_cast<i64>(std::lcm(q, u64{4}));
    std::vector<std::vector<std::complex<double>>> tables;
    for (const auto& chi : chars) {
      std::vector<std::complex<double>> t;
      for (i64 n = 0; n < L; ++n) t.push_back(chi(n) * static_cast<double>(chi4(n)));
      tables.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < tables.size(); ++i)
      for (std::size_t j = i + 1; j < tables.size(); ++j) {
        double diff = 0;
        for (i64 n = 0; n < L; ++n) diff = std::max(diff, std::abs(tables[i][n] - tables[j][n]));
        ASSERT_GT(diff, 1e-6) << q;
      }
  }
}

TEST(CharHSum, Examples) {
  // per-term oracle: n <= 10 with h(n) != 0 are 1, 2, 4, 5, 8, 9, 10
  double oracle = 0;
  for (u64 n = 1; n <= 10; ++n)
    if (h_of(n)) oracle += 1.0 / h_of(n);
  EXPECT_DOUBLE_EQ(oracle, 6.0);
  auto principal = enumerate_characters(1)[0];
  EXPECT_NEAR(std::abs(char_h_sum(principal, 10) - oracle), 0.0, 1e-14);
  EXPECT_EQ(char_h_sum(enumerate_characters(5)[1], 0), 0.0);
  EXPECT_NEAR(std::abs(char_h_sum(enumerate_characters(4)[1], 2) - 1.0), 0.0, 1e-15);
}

TEST(CharHSum, MatchesPerTermOracle) {
  for (u64 q : {3ULL, 8ULL, 15ULL}) {
    for (const auto& chi : enumerate_characters(q)) {
      std::complex<double> s = 0;
      for (u64 n = 1; n <= 5000; ++n)
        if (h_of(n)) s += chi(static_cast<i64>(n)) / static_cast<double>(h_of(n));
      EXPECT_LT(std::abs(char_h_sum(chi, 5000) - s), 1e-10);
    }
  }
}
