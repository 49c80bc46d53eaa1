#include "tsrl/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tsrl/errors.hpp"

namespace tsrl {
namespace {

constexpr u64 kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (u64 i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(static_cast<std::uint32_t>(i));
      for (u64 j = i * i; j <= kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

u64 splitmix64(u64& state) {
  u64 z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Brent's cycle finding. Returns a nontrivial factor of an odd composite n.
u64 pollard_brent(u64 n) {
  u64 state = 0x2A;
  for (;;) {
    u64 c = splitmix64(state) % (n - 1) + 1;
    u64 y = splitmix64(state) % n;
    u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto step = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u64(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_large(d, out);
  factor_large(n / d, out);
}

}  // namespace

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 mod_inv(i64 a, u64 q) {
  if (q == 0) throw Error(Errc::PreconditionViolated, "modulus must be positive");
  i64 r = static_cast<i64>(static_cast<unsigned __int128>(a < 0 ? -(__int128)a : a) % q);
  if (a < 0 && r != 0) r = static_cast<i64>(q) - r;
  // Extended Euclid on (r, q) in signed 128-bit to avoid overflow.
  __int128 old_r = r, cur_r = q, old_s = 1, cur_s = 0;
  while (cur_r != 0) {
    __int128 quot = old_r / cur_r;
    __int128 t = old_r - quot * cur_r;
    old_r = cur_r;
    cur_r = t;
    t = old_s - quot * cur_s;
    old_s = cur_s;
    cur_s = t;
  }
  if (q == 1) return 0;
  if (old_r != 1) {
    throw Error(Errc::NotCoprime, "gcd(" + std::to_string(a) + ", " + std::to_string(q) + ") > 1");
  }
  __int128 v = old_s % static_cast<__int128>(q);
  if (v < 0) v += q;
  return static_cast<u64>(v);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Witness set known to be deterministic for all 64-bit inputs.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 base = a % n;
    if (base == 0) continue;
    u64 x = pow_mod(base, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Factorization factorize(u64 n) {
  if (n == 0) throw Error(Errc::PreconditionViolated, "factorize requires n >= 1");
  Factorization f;
  f.n = n;
  u64 rest = n;
  bool exhausted = true;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<u64>(p) * p > rest) {
      exhausted = false;
      break;
    }
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  if (rest == 1) return f;
  if (!exhausted || rest < kTrialLimit * kTrialLimit) {
    f.factors.push_back({rest, 1});
    return f;
  }
  std::vector<u64> big;
  factor_large(rest, big);
  std::sort(big.begin(), big.end());
  for (u64 p : big) {
    if (!f.factors.empty() && f.factors.back().prime == p) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

int chi4(i64 n) {
  i64 r = n % 4;
  if (r < 0) r += 4;
  if (r == 1) return 1;
  if (r == 3) return -1;
  return 0;
}

std::uint32_t h_of(const Factorization& f) {
  u64 h = 1;
  for (const auto& [p, e] : f.factors) {
    if (p % 4 == 1) {
      h *= e + 1;
    } else if (p % 4 == 3 && e % 2 == 1) {
      return 0;
    }
  }
  return static_cast<std::uint32_t>(std::min<u64>(h, UINT32_MAX));
}

u64 euler_phi(const Factorization& f) {
  u64 r = f.n;
  for (const auto& pe : f.factors) r = r / pe.prime * (pe.prime - 1);
  return r;
}

u64 tau_of(const Factorization& f) {
  u64 t = 1;
  for (const auto& pe : f.factors) t *= pe.exponent + 1;
  return t;
}

unsigned omega_of(const Factorization& f) { return static_cast<unsigned>(f.factors.size()); }

int mobius_of(const Factorization& f) {
  for (const auto& pe : f.factors) {
    if (pe.exponent > 1) return 0;
  }
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::uint32_t h_of(u64 n) { return h_of(factorize(n)); }
u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }
u64 tau_of(u64 n) { return tau_of(factorize(n)); }
int mobius_of(u64 n) { return mobius_of(factorize(n)); }

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : f.factors) {
    std::size_t base = out.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<u64, u64> decompose_delta(u64 delta, u64 delta1, u64 delta2) {
  if (delta == 0 || delta1 == 0 || delta2 == 0) throw Error(Errc::BadShape, "moduli must be positive");
  if (gcd_u64(delta1, delta2) != 1) throw Error(Errc::BadShape, "delta1 and delta2 must be coprime");
  Factorization fd = factorize(delta);
  auto divides_delta = [&](u64 p) { return delta % p == 0; };
  for (u64 side : {delta1, delta2}) {
    for (const auto& pe : factorize(side).factors) {
      if (!divides_delta(pe.prime)) {
        throw Error(Errc::BadShape, "prime " + std::to_string(pe.prime) + " of delta_i does not divide delta");
      }
    }
  }
  // Untouched part of delta, then the full p-parts of delta*delta_i for primes of delta_i.
  u64 core = 1;
  for (const auto& [p, e] : fd.factors) {
    if (delta1 % p != 0 && delta2 % p != 0) {
      for (unsigned k = 0; k < e; ++k) core *= p;
    }
  }
  auto p_part = [](u64 m, u64 p) {
    u64 r = 1;
    while (m % p == 0) {
      m /= p;
      r *= p;
    }
    return r;
  };
  u64 part1 = 1, part2 = 1;
  for (const auto& pe : factorize(delta1).factors) part1 *= p_part(delta * delta1, pe.prime);
  for (const auto& pe : factorize(delta2).factors) part2 *= p_part(delta * delta2, pe.prime);
  return {core * part1, part2};
}

std::optional<u64> lemma9_lambda(const CrtSystem& sys) {
  auto [P, Q] = decompose_delta(sys.delta, sys.delta1, sys.delta2);
  if (sys.a % sys.delta != sys.b % sys.delta) return std::nullopt;
  u64 T = sys.delta * sys.delta1 * sys.delta2;
  u64 alpha = sys.a % (sys.delta * sys.delta1);
  u64 beta = sys.b % (sys.delta * sys.delta2);
  u64 qp = mod_inv(static_cast<i64>(Q % P), P);
  u64 pq = mod_inv(static_cast<i64>(P % Q), Q);
  u64 t1 = mul_mod(mul_mod(alpha % T, Q % T, T), qp % T, T);
  u64 t2 = mul_mod(mul_mod(beta % T, P % T, T), pq % T, T);
  return (t1 + t2) % T;
}

}  // namespace tsrl
