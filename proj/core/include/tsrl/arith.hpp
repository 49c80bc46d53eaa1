#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace tsrl {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;  // strictly increasing primes
};

u64 gcd_u64(u64 a, u64 b);
u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

// Residue v in [0, q) with a*v = 1 (mod q). Throws NotCoprime.
u64 mod_inv(i64 a, u64 q);

bool is_prime(u64 n);
Factorization factorize(u64 n);

int chi4(i64 n);

std::uint32_t h_of(const Factorization& f);
u64 euler_phi(const Factorization& f);
u64 tau_of(const Factorization& f);
unsigned omega_of(const Factorization& f);
int mobius_of(const Factorization& f);

// Convenience overloads that factorize first.
std::uint32_t h_of(u64 n);
u64 euler_phi(u64 n);
u64 tau_of(u64 n);
int mobius_of(u64 n);

std::vector<u64> divisors(const Factorization& f);

// Moduli (P, Q) with P*Q = D*D1*D2 splitting the simultaneous congruence
// m = a (mod D*D1), m = b (mod D*D2) into coprime pieces. Throws BadShape.
struct CrtSystem {
  u64 delta = 1;
  u64 delta1 = 1;
  u64 delta2 = 1;
  u64 a = 0;
  u64 b = 0;
};

std::pair<u64, u64> decompose_delta(u64 delta, u64 delta1, u64 delta2);

// Residue lambda mod D*D1*D2 solving the system, or nullopt when a != b (mod D).
std::optional<u64> lemma9_lambda(const CrtSystem& sys);

}  // namespace tsrl
