#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tsrl/arith.hpp"

namespace tsrl {

// Simultaneous congruence m = a (mod D*D1), m = b (mod D*D2) against its one-modulus form.
struct Lemma9Counterexample {
  u64 a = 0;
  u64 b = 0;
  std::string reason;
};

struct Lemma9Result {
  bool pass = true;
  u64 pairs_checked = 0;
  std::optional<Lemma9Counterexample> counterexample;
};

Lemma9Result lemma9_verify(u64 delta, u64 delta1, u64 delta2);

// All shapes with delta <= max_delta, coprime delta1, delta2 <= max_side whose primes divide delta.
struct Lemma9Sweep {
  u64 shapes = 0;
  u64 pairs_checked = 0;
  u64 failures = 0;
  std::optional<std::array<u64, 3>> first_failing_shape;
};

Lemma9Sweep lemma9_sweep(u64 max_delta = 12, u64 max_side = 16);

// Exact check that the two sides of the inverse-residue congruence differ by an integer.
// Throws PreconditionViolated unless a, b, cd are pairwise coprime and gcd(cd, e) = 1.
bool lemma10_verify(i64 a, i64 b, i64 c, i64 d, i64 e);

struct Lemma10Sweep {
  u64 tuples = 0;
  u64 failures = 0;
};

// `count` random valid tuples with entries in [1, max_entry] (d - e may be negative).
Lemma10Sweep lemma10_sweep(u64 count = 10'000, i64 max_entry = 1000, u64 seed = 0x2A);

// g together with its first three derivatives, in extended precision.
struct ThriceDifferentiable {
  std::function<long double(long double)> g, d1, d2, d3;
};

// Max relative error between closed-form partials of g(a x1/(x2 x3)) and finite differences.
double lemma10_5_verify(const ThriceDifferentiable& g, double a, double x1, double x2, double x3);

// Closed-form partial of g(a x1/(x2 x3)) for the coordinates in `mask` (bit i <-> x_{i+1}).
long double lemma10_5_partial(const ThriceDifferentiable& g, double a, const std::array<double, 3>& x, unsigned mask);

// A function of up to three variables with its mixed partials, selected by bitmask.
struct SmoothField {
  unsigned dim = 1;
  std::function<double(const std::array<double, 3>&, unsigned mask)> partial;
};

struct Lemma11Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
};

// lhs = sum_{K < n <= L} c(n) f(n); rhs = C(L) f(L) plus the signed integral terms.
// `coeff` is indexed row-major over the box, axis 0 slowest.
Lemma11Result lemma11_verify(unsigned m, const std::vector<long>& coeff, const SmoothField& f,
                             const std::array<long, 3>& K, const std::array<long, 3>& L, double tol = 1e-10);

struct Lemma11Case {
  std::string name;
  unsigned m = 1;
  std::vector<long> coeff;
  SmoothField f;
  std::array<long, 3> K{0, 0, 0};
  std::array<long, 3> L{0, 0, 0};
};

// The fixed suites for m = 1, 2, 3: constant, zero and seeded random coefficients against
// polynomial, exponential and rational fields.
std::vector<Lemma11Case> lemma11_standard_cases(u64 seed = 0x2A);

std::complex<double> kloosterman(i64 a, i64 b, u64 c);

struct TrilinearSpec {
  double M = 1, N = 1, A = 1;
  long theta = 1;
  std::function<std::complex<double>(long)> alpha, beta, nu;
};

struct TrilinearResult {
  std::complex<double> value;
  double bound_ratio = 0.0;
  double rhs = 0.0;
};

// Throws SizeTooLarge when any of M, N, A exceeds 200.
TrilinearResult trilinear_B(const TrilinearSpec& spec);

struct TrilinearSweep {
  std::size_t points = 0;
  double max_ratio = 0.0;
  bool all_finite = true;
};

// Random unimodular sequences on sizes in [8, 64], theta in [-5, 5] without 0.
TrilinearSweep trilinear_sweep(std::size_t points = 50, u64 seed = 0x2A);

struct ShiuDiagnostic {
  u64 x = 0;
  u64 q = 0, a = 0;
  double lhs = 0.0;
  double rhs_without_constant = 0.0;
  double ratio = 0.0;
};

// h over (x/2, x] restricted to n = a (mod q).
ShiuDiagnostic shiu_diagnostic(u64 x, u64 q = 3, u64 a = 1);

struct RichertHalberstamDiagnostic {
  u64 x = 0;
  double lhs = 0.0;
  double rhs_without_constant = 0.0;
  double ratio = 0.0;
  double empirical_A = 0.0;
  double empirical_B = 0.0;
};

// f = 1/h on its support.
RichertHalberstamDiagnostic richert_halberstam_diagnostic(u64 x);

}  // namespace tsrl
