#include "tsrl/characters.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "tsrl/errors.hpp"
#include "tsrl/numeric.hpp"
#include "tsrl/sieve.hpp"

namespace tsrl {

namespace detail {

// One cyclic factor of (Z/qZ)^*: lives in the prime-power component `pa`, has the given
// order, and maps a unit residue mod pa to its discrete log.
struct CyclicFactor {
  u64 prime;
  u64 pa;
  u64 order;
  u64 generator;  // residue mod pa generating this factor
  std::vector<std::uint32_t> log;
};

struct CharacterGroup {
  u64 q = 1;
  u64 phi = 1;
  u64 exponent_lcm = 1;
  std::vector<CyclicFactor> factors;
  std::vector<u64> primes;
};

}  // namespace detail

namespace {

using detail::CharacterGroup;
using detail::CyclicFactor;

u64 smallest_primitive_root(u64 p, u64 pa) {
  u64 phi = pa / p * (p - 1);
  auto fac = factorize(phi);
  for (u64 g = 2; g < pa; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& pe : fac.factors) {
      if (pow_mod(g, phi / pe.prime, pa) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // pa == 2 has trivial unit group
}

std::shared_ptr<const CharacterGroup> build_group(u64 q) {
  auto g = std::make_shared<CharacterGroup>();
  g->q = q;
  auto f = factorize(q);
  g->phi = euler_phi(f);
  for (const auto& [p, e] : f.factors) {
    g->primes.push_back(p);
    u64 pa = 1;
    for (unsigned k = 0; k < e; ++k) pa *= p;
    if (p == 2) {
      if (e >= 2) {
        CyclicFactor sign{2, pa, 2, pa - 1, std::vector<std::uint32_t>(pa, 0)};
        for (u64 r = 1; r < pa; r += 2) sign.log[r] = (r % 4 == 1) ? 0 : 1;
        g->factors.push_back(std::move(sign));
      }
      if (e >= 3) {
        u64 order = pa / 4;
        CyclicFactor five{2, pa, order, 5, std::vector<std::uint32_t>(pa, 0)};
        u64 v = 1;
        for (u64 k = 0; k < order; ++k) {
          five.log[v] = static_cast<std::uint32_t>(k);
          five.log[pa - v] = static_cast<std::uint32_t>(k);
          v = v * 5 % pa;
        }
        g->factors.push_back(std::move(five));
      }
    } else {
      u64 order = pa / p * (p - 1);
      u64 gen = smallest_primitive_root(p, pa);
      CyclicFactor cyc{p, pa, order, gen, std::vector<std::uint32_t>(pa, 0)};
      u64 v = 1;
      for (u64 k = 0; k < order; ++k) {
        cyc.log[v] = static_cast<std::uint32_t>(k);
        v = v * gen % pa;
      }
      g->factors.push_back(std::move(cyc));
    }
  }
  for (const auto& c : g->factors) g->exponent_lcm = std::lcm(g->exponent_lcm, c.order);
  return g;
}

std::shared_ptr<const CharacterGroup> group_for(u64 q) {
  if (q == 0 || q > kMaxCharacterModulus) {
    throw Error(Errc::ModulusTooLarge, "character modulus " + std::to_string(q) + " outside [1, 1e5]");
  }
  static std::mutex mu;
  static std::map<u64, std::shared_ptr<const CharacterGroup>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto g = build_group(q);
  cache.emplace(q, g);
  return g;
}

// n = r (mod m1), n = 1 (mod m2) for coprime m1, m2.
u64 crt_pair(u64 r, u64 m1, u64 m2) {
  if (m2 == 1) return r % m1;
  u64 inv = mod_inv(static_cast<i64>(m1 % m2), m2);
  // n = r + m1 * t with m1 * t = 1 - r (mod m2)
  u64 rhs = (1 + m2 - r % m2) % m2;
  u64 t = mul_mod(rhs, inv, m2);
  return r % m1 + m1 * t;
}

u64 prime_part(u64 m, u64 p) {
  u64 r = 1;
  while (m % p == 0) {
    m /= p;
    r *= p;
  }
  return r;
}

// Exponent vector of the character mod `target` whose values on units coprime to
// `lift_modulus` (a multiple of target) are given by `values`.
std::vector<u64> exponents_from_values(const CharacterGroup& grp, u64 lift_modulus,
                                       const std::function<std::optional<Angle>(u64)>& values) {
  std::vector<u64> exps;
  for (const auto& c : grp.factors) {
    u64 ppart = prime_part(lift_modulus, c.prime);
    u64 n = crt_pair(c.generator % ppart, ppart, lift_modulus / ppart);
    auto a = values(n);
    if (!a) throw Error(Errc::BadShape, "value function vanishes at a unit");
    // angle * order must be an integer
    unsigned __int128 scaled = static_cast<unsigned __int128>(a->num) * c.order;
    if (scaled % a->den != 0) throw Error(Errc::BadShape, "values are not a character of this modulus");
    exps.push_back(static_cast<u64>(scaled / a->den));
  }
  return exps;
}

}  // namespace

Angle make_angle(i64 num, u64 den) {
  i64 d = static_cast<i64>(den);
  i64 r = num % d;
  if (r < 0) r += d;
  u64 g = std::gcd(static_cast<u64>(r), den);
  if (g == 0) g = den;
  return {static_cast<u64>(r) / g, den / g};
}

Angle operator+(const Angle& x, const Angle& y) {
  u64 l = std::lcm(x.den, y.den);
  u64 n = (x.num * (l / x.den) + y.num * (l / y.den)) % l;
  return make_angle(static_cast<i64>(n), l);
}

std::complex<double> to_complex(const Angle& a) {
  return unit_phase(static_cast<i64>(a.num), static_cast<i64>(a.den));
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const detail::CharacterGroup> group, std::vector<u64> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {}

u64 DirichletCharacter::modulus() const { return group_->q; }

std::optional<Angle> DirichletCharacter::angle(i64 n) const {
  const auto& g = *group_;
  i64 qi = static_cast<i64>(g.q);
  u64 r = static_cast<u64>(((n % qi) + qi) % qi);
  for (u64 p : g.primes) {
    if (r % p == 0) return std::nullopt;
  }
  u64 L = g.exponent_lcm;
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < g.factors.size(); ++i) {
    const auto& c = g.factors[i];
    acc += static_cast<unsigned __int128>(exponents_[i]) * c.log[r % c.pa] * (L / c.order);
  }
  return make_angle(static_cast<i64>(acc % L), L);
}

std::complex<double> DirichletCharacter::operator()(i64 n) const {
  auto a = angle(n);
  return a ? to_complex(*a) : std::complex<double>(0.0, 0.0);
}

bool DirichletCharacter::is_principal() const {
  for (u64 e : exponents_) {
    if (e != 0) return false;
  }
  return true;
}

std::vector<DirichletCharacter> enumerate_characters(u64 q) {
  auto grp = group_for(q);
  std::vector<DirichletCharacter> out;
  out.reserve(grp->phi);
  std::vector<u64> exps(grp->factors.size(), 0);
  for (;;) {
    out.emplace_back(grp, exps);
    std::size_t i = 0;
    for (; i < exps.size(); ++i) {
      if (++exps[i] < grp->factors[i].order) break;
      exps[i] = 0;
    }
    if (i == exps.size()) break;
  }
  return out;
}

DirichletCharacter character_from_function(u64 q, const std::function<std::optional<Angle>(u64)>& values) {
  auto grp = group_for(q);
  auto exps = exponents_from_values(*grp, q, values);
  DirichletCharacter chi(grp, exps);
  for (u64 n = 1; n <= q; ++n) {
    if (chi.angle(static_cast<i64>(n)) != values(n)) {
      throw Error(Errc::BadShape, "values are not a character mod " + std::to_string(q));
    }
  }
  return chi;
}

DirichletCharacter chi4_character() { return DirichletCharacter(group_for(4), {1}); }

u64 conductor(const DirichletCharacter& chi) {
  u64 q = chi.modulus();
  for (u64 d : divisors(factorize(q))) {
    bool trivial = true;
    for (u64 n = 1; n <= q && trivial; n += d) {
      auto a = chi.angle(static_cast<i64>(n));
      if (a && a->num != 0) trivial = false;
    }
    if (trivial) return d;
  }
  return q;
}

bool is_primitive(const DirichletCharacter& chi) { return conductor(chi) == chi.modulus(); }

DirichletCharacter primitive_inducer(const DirichletCharacter& chi) {
  u64 f = conductor(chi);
  auto grp = group_for(f);
  auto exps = exponents_from_values(*grp, chi.modulus(), [&](u64 n) { return chi.angle(static_cast<i64>(n)); });
  return DirichletCharacter(grp, exps);
}

std::pair<DirichletCharacter, u64> times_chi4(const DirichletCharacter& chi) {
  u64 d = chi.modulus();
  if (d < 3 || !is_primitive(chi)) {
    throw Error(Errc::NotPrimitive, "times_chi4 needs a primitive character of modulus >= 3");
  }
  u64 L = std::lcm<u64>(d, 4);
  auto grp = group_for(L);
  auto product = [&](u64 n) -> std::optional<Angle> {
    auto a = chi.angle(static_cast<i64>(n));
    int c4 = chi4(static_cast<i64>(n));
    if (!a || c4 == 0) return std::nullopt;
    return c4 == 1 ? *a : *a + Angle{1, 2};
  };
  DirichletCharacter prod(grp, exponents_from_values(*grp, L, product));
  return {prod, conductor(prod)};
}

u64 times_chi4_conductor_formula(u64 d) {
  if (d % 2 == 1) return 4 * d;
  if (d % 8 == 0) return d;
  if (d % 4 == 0) return d / 4;
  throw Error(Errc::BadShape, "no primitive characters when 2 || d");
}

std::complex<double> char_h_sum(const DirichletCharacter& chi, u64 N) {
  if (N > 10'000'000) throw Error(Errc::RangeTooLarge, "char_h_sum limited to N <= 1e7");
  CompensatedComplexSum acc;
  if (N == 0) return {0.0, 0.0};
  auto table = sieve_h(1, N + 1);
  for (u64 n = 1; n <= N; ++n) {
    std::uint32_t h = table.h(n);
    if (h == 0) continue;
    auto a = chi.angle(static_cast<i64>(n));
    if (!a) continue;
    acc.add(to_complex(*a) / static_cast<double>(h));
  }
  return acc.value();
}

}  // namespace tsrl
