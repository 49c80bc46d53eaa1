#pragma once

#include <cstdint>
#include <string>

#include "tsrl/arith.hpp"
#include "tsrl/numeric.hpp"

namespace tsrl {

constexpr u64 kDefaultPrimeLimit = 10'000'000;

struct EulerProductValue {
  std::string name;
  double value = 0.0;
  DoubleDouble log_value;  // log of value, prefactor included
  u64 prime_limit = 0;
  double tail_bound = 0.0;  // bound on |log of the omitted factors|
  double interval_lo = 0.0;
  double interval_hi = 0.0;
};

// Logs of the single Euler factors at prime p, evaluated without cancellation.
double c1_log_factor(u64 p);       // p = 1 (mod 4)
double korolev_log_factor(u64 p);  // all p
double c_log_factor(u64 p);        // all p
double p1_log_factor(u64 p);       // p = 1 (mod 4)
double p3_log_factor(u64 p);       // p = 3 (mod 4)

// p*log(p/(p-1)) - 1 = sum_{k>=1} p^{-k}/(k+1)
double p1_inner_series(u64 p);

// The products below throw PreconditionViolated for prime_limit < 1e5.
EulerProductValue c1_closed_form(u64 prime_limit = kDefaultPrimeLimit);
EulerProductValue c1_via_identity(u64 prime_limit = kDefaultPrimeLimit);
EulerProductValue korolev_K(u64 prime_limit = kDefaultPrimeLimit);
EulerProductValue c_constant(u64 prime_limit = kDefaultPrimeLimit);
EulerProductValue p1_at_one(u64 prime_limit = kDefaultPrimeLimit);
EulerProductValue p3_at_one(u64 prime_limit = kDefaultPrimeLimit);
EulerProductValue g_at_one(u64 prime_limit = kDefaultPrimeLimit);

double gamma_quarter();

// L(1, chi4) from `terms` alternating terms plus an Euler-Boole tail correction.
double l_one_chi4(u64 terms = 10'000);
// Plain partial sum of the first `terms` terms.
double l_one_chi4_partial(u64 terms);

// Upper bound for sum_{p > P} p^-2 from pi(x) < 1.25506 x / ln x.
double prime_square_tail(u64 P);

}  // namespace tsrl
