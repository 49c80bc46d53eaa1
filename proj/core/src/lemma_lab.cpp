#include "tsrl/lemma_lab.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "tsrl/errors.hpp"
#include "tsrl/numeric.hpp"
#include "tsrl/quadrature.hpp"
#include "tsrl/sieve.hpp"

namespace tsrl {

Lemma9Result lemma9_verify(u64 delta, u64 delta1, u64 delta2) {
  decompose_delta(delta, delta1, delta2);  // validates the shape
  const u64 m1 = delta * delta1, m2 = delta * delta2, T = delta * delta1 * delta2;
  // Each m mod T lands on exactly one residue pair; count hits per pair.
  std::vector<std::uint32_t> hits(m1 * m2, 0);
  std::vector<u64> witness(m1 * m2, 0);
  for (u64 m = 0; m < T; ++m) {
    u64 idx = (m % m1) * m2 + m % m2;
    ++hits[idx];
    witness[idx] = m;
  }
  Lemma9Result res;
  for (u64 a = 0; a < m1; ++a) {
    for (u64 b = 0; b < m2; ++b) {
      ++res.pairs_checked;
      u64 idx = a * m2 + b;
      auto lam = lemma9_lambda(CrtSystem{delta, delta1, delta2, a, b});
      std::string why;
      if (a % delta == b % delta) {
        if (!lam) why = "compatible pair reported unsolvable";
        else if (hits[idx] != 1) why = "scan found " + std::to_string(hits[idx]) + " solutions";
        else if (witness[idx] != *lam) why = "lambda " + std::to_string(*lam) + " differs from scan " + std::to_string(witness[idx]);
      } else {
        if (lam) why = "incompatible pair given a residue";
        else if (hits[idx] != 0) why = "scan found solutions for an incompatible pair";
      }
      if (!why.empty()) {
        res.pass = false;
        res.counterexample = Lemma9Counterexample{a, b, why};
        return res;
      }
    }
  }
  return res;
}

Lemma9Sweep lemma9_sweep(u64 max_delta, u64 max_side) {
  Lemma9Sweep sweep;
  for (u64 d = 1; d <= max_delta; ++d) {
    for (u64 d1 = 1; d1 <= max_side; ++d1) {
      for (u64 d2 = 1; d2 <= max_side; ++d2) {
        if (std::gcd(d1, d2) != 1) continue;
        bool shape_ok = true;
        for (u64 side : {d1, d2})
          for (const auto& pe : factorize(side).factors)
            if (d % pe.prime != 0) shape_ok = false;
        if (!shape_ok) continue;
        ++sweep.shapes;
        auto r = lemma9_verify(d, d1, d2);
        sweep.pairs_checked += r.pairs_checked;
        if (!r.pass) {
          ++sweep.failures;
          if (!sweep.first_failing_shape) sweep.first_failing_shape = std::array<u64, 3>{d, d1, d2};
        }
      }
    }
  }
  return sweep;
}

namespace {

i64 igcd(i64 a, i64 b) { return static_cast<i64>(std::gcd(a < 0 ? -a : a, b < 0 ? -b : b)); }

mpq_class inverse_over(i64 x, i64 mod) {
  u64 inv = mod_inv(x, static_cast<u64>(mod));
  mpq_class q(mpz_class(std::to_string(inv)), mpz_class(std::to_string(mod)));
  q.canonicalize();
  return q;
}

}  // namespace

bool lemma10_verify(i64 a, i64 b, i64 c, i64 d, i64 e) {
  if (a <= 0 || b <= 0 || c <= 0 || d <= 0 || e <= 0) {
    throw Error(Errc::PreconditionViolated, "lemma10 arguments must be positive");
  }
  const i64 cd = c * d;
  if (igcd(a, b) != 1 || igcd(a, cd) != 1 || igcd(b, cd) != 1 || igcd(cd, e) != 1) {
    throw Error(Errc::PreconditionViolated, "need a, b, cd pairwise coprime and gcd(cd, e) = 1");
  }
  // (acd)*_b/b + (abe)*_c/c  =  1/(abcd) - (bcd)*_a/a + (d-e)(abe)*_{cd}/(cd)  (mod 1)
  mpq_class lhs = inverse_over(a * cd % b, b) + inverse_over(a * b % c * e % c, c);
  mpq_class abcd(mpz_class(1), mpz_class(std::to_string(a)) * b * c * d);
  abcd.canonicalize();
  mpq_class rhs = abcd - inverse_over(b * cd % a, a) +
                  mpq_class(mpz_class(std::to_string(d - e))) * inverse_over(a * b % cd * e % cd, cd);
  mpq_class diff = lhs - rhs;
  diff.canonicalize();
  return diff.get_den() == 1;
}

Lemma10Sweep lemma10_sweep(u64 count, i64 max_entry, u64 seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<i64> dist(1, max_entry);
  Lemma10Sweep sweep;
  while (sweep.tuples < count) {
    i64 a = dist(rng), b = dist(rng), c = dist(rng), d = dist(rng), e = dist(rng);
    i64 cd = c * d;
    if (igcd(a, b) != 1 || igcd(a, cd) != 1 || igcd(b, cd) != 1 || igcd(cd, e) != 1) continue;
    ++sweep.tuples;
    if (!lemma10_verify(a, b, c, d, e)) ++sweep.failures;
  }
  return sweep;
}

long double lemma10_5_partial(const ThriceDifferentiable& g, double a, const std::array<double, 3>& x, unsigned mask) {
  const long double x1 = x[0], x2 = x[1], x3 = x[2];
  const long double z = a * x1 / (x2 * x3);
  const long double g1 = g.d1(z), g2 = g.d2(z), g3 = g.d3(z);
  const long double F1 = z * g1;
  const long double F2 = z * g1 + z * z * g2;
  const long double F3 = z * g1 + 3 * z * z * g2 + z * z * z * g3;
  const long double xs[3] = {x1, x2, x3};
  switch (__builtin_popcount(mask)) {
    case 0:
      return g.g(z);
    case 1: {
      int i = __builtin_ctz(mask);
      return (i == 0 ? 1.0L : -1.0L) * F1 / xs[i];
    }
    case 2: {
      int i = __builtin_ctz(mask);
      int j = 31 - __builtin_clz(mask);
      return (i == 0 ? -1.0L : 1.0L) * F2 / (xs[i] * xs[j]);
    }
    default:
      return F3 / (x1 * x2 * x3);
  }
}

double lemma10_5_verify(const ThriceDifferentiable& g, double a, double x1, double x2, double x3) {
  if (x2 == 0.0 || x3 == 0.0) throw Error(Errc::PreconditionViolated, "x2 and x3 must be non-zero");
  const std::array<long double, 3> x{x1, x2, x3};
  auto F = [&](const std::array<long double, 3>& p) { return g.g(a * p[0] / (p[1] * p[2])); };
  // Central difference over the coordinates in mask with relative step h.
  auto central = [&](unsigned mask, long double h) {
    std::array<long double, 3> step{};
    for (int i = 0; i < 3; ++i) step[i] = h * (x[i] != 0 ? std::fabs(x[i]) : 1.0L);
    long double acc = 0.0L;
    int k = __builtin_popcount(mask);
    for (unsigned signs = 0; signs < (1u << 3); ++signs) {
      if (signs & ~mask) continue;
      std::array<long double, 3> p = x;
      int negatives = 0;
      for (int i = 0; i < 3; ++i) {
        if (!(mask >> i & 1)) continue;
        bool neg = signs >> i & 1;
        p[i] += neg ? -step[i] : step[i];
        negatives += neg;
      }
      acc += (negatives % 2 ? -1.0L : 1.0L) * F(p);
    }
    long double denom = std::pow(2.0L, k);
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) denom *= step[i];
    return acc / denom;
  };
  constexpr long double h1 = 1e-3L, h2 = 1e-4L;
  double worst = 0.0;
  for (unsigned mask : {1u, 2u, 4u, 3u, 5u, 6u, 7u}) {
    long double d1 = central(mask, h1), d2 = central(mask, h2);
    long double fd = (h1 * h1 * d2 - h2 * h2 * d1) / (h1 * h1 - h2 * h2);
    long double exact = lemma10_5_partial(g, a, {x1, x2, x3}, mask);
    long double scale = std::max(std::fabs(exact), 1e-300L);
    worst = std::max(worst, static_cast<double>(std::fabs(fd - exact) / scale));
  }
  return worst;
}

Lemma11Result lemma11_verify(unsigned m, const std::vector<long>& coeff, const SmoothField& f,
                             const std::array<long, 3>& K, const std::array<long, 3>& L, double tol) {
  if (m < 1 || m > 3) throw Error(Errc::PreconditionViolated, "dimension must be 1, 2 or 3");
  std::array<long, 3> len{1, 1, 1};
  std::size_t cells = 1;
  for (unsigned i = 0; i < m; ++i) {
    len[i] = L[i] - K[i];
    if (len[i] < 0 || len[i] > 30) throw Error(Errc::PreconditionViolated, "axis ranges must lie in [0, 30]");
    cells *= static_cast<std::size_t>(len[i]);
  }
  if (coeff.size() != cells) throw Error(Errc::PreconditionViolated, "coefficient array has the wrong size");

  // Cumulative sums C over corners t with K <= t <= L, stored with (len+1) per axis.
  std::array<long, 3> ext{1, 1, 1};
  for (unsigned i = 0; i < m; ++i) ext[i] = len[i] + 1;
  std::vector<double> C(static_cast<std::size_t>(ext[0] * ext[1] * ext[2]), 0.0);
  auto cidx = [&](long i, long j, long k) { return static_cast<std::size_t>((i * ext[1] + j) * ext[2] + k); };
  auto coeff_at = [&](long i, long j, long k) {
    return coeff[static_cast<std::size_t>((i * (m > 1 ? len[1] : 1) + j) * (m > 2 ? len[2] : 1) + k)];
  };
  for (long i = 0; i < ext[0]; ++i)
    for (long j = 0; j < ext[1]; ++j)
      for (long k = 0; k < ext[2]; ++k) {
        double v = 0.0;
        bool inner = (m < 1 || i > 0) && (m < 2 || j > 0) && (m < 3 || k > 0);
        if (inner) v = static_cast<double>(coeff_at(m >= 1 ? i - 1 : 0, m >= 2 ? j - 1 : 0, m >= 3 ? k - 1 : 0));
        // inclusion-exclusion over the lower neighbours
        for (unsigned s = 1; s < (1u << m); ++s) {
          long di = (s & 1) ? 1 : 0, dj = (s & 2) ? 1 : 0, dk = (s & 4) ? 1 : 0;
          if (i - di < 0 || j - dj < 0 || k - dk < 0) {
            continue;
          }
          double sign = (__builtin_popcount(s) % 2) ? 1.0 : -1.0;
          v += sign * C[cidx(i - di, j - dj, k - dk)];
        }
        C[cidx(i, j, k)] = v;
      }

  auto point = [&](const std::array<long, 3>& offs) {
    std::array<double, 3> p{0, 0, 0};
    for (unsigned i = 0; i < m; ++i) p[i] = static_cast<double>(K[i] + offs[i]);
    return p;
  };

  CompensatedSum lhs;
  for (long i = 1; i <= len[0]; ++i)
    for (long j = (m > 1 ? 1 : 0); j <= (m > 1 ? len[1] : 0); ++j)
      for (long k = (m > 2 ? 1 : 0); k <= (m > 2 ? len[2] : 0); ++k) {
        double c = static_cast<double>(coeff_at(i - 1, m > 1 ? j - 1 : 0, m > 2 ? k - 1 : 0));
        if (c != 0.0) lhs.add(c * f.partial(point({i, j, k}), 0));
      }

  CompensatedSum rhs;
  std::array<long, 3> top{len[0], m > 1 ? len[1] : 0, m > 2 ? len[2] : 0};
  rhs.add(C[cidx(top[0], top[1], top[2])] * f.partial(point(top), 0));

  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<unsigned> axes;
    for (unsigned i = 0; i < m; ++i)
      if (mask >> i & 1) axes.push_back(i);
    double sign = axes.size() % 2 ? -1.0 : 1.0;
    // Walk every unit cell of the free axes; C is constant inside each.
    std::array<long, 3> cell = top;
    std::function<void(std::size_t)> walk = [&](std::size_t depth) {
      if (depth == axes.size()) {
        double cval = C[cidx(cell[0], cell[1], cell[2])];
        if (cval == 0.0) return;
        std::array<double, 3> base = point(top);
        std::function<double(std::size_t, std::array<double, 3>&)> nested =
            [&](std::size_t level, std::array<double, 3>& p) -> double {
          if (level == axes.size()) return f.partial(p, mask);
          unsigned ax = axes[level];
          double lo = static_cast<double>(K[ax] + cell[ax]);
          return integrate(
                     [&](double t) {
                       p[ax] = t;
                       return nested(level + 1, p);
                     },
                     lo, lo + 1.0, tol)
              .value;
        };
        rhs.add(sign * cval * nested(0, base));
        return;
      }
      unsigned ax = axes[depth];
      for (long c = 0; c < len[ax]; ++c) {
        cell[ax] = c;
        walk(depth + 1);
      }
      cell[ax] = top[ax];
    };
    walk(0);
  }
  Lemma11Result res{lhs.value(), rhs.value(), 0.0};
  res.abs_error = std::fabs(res.lhs - res.rhs);
  return res;
}

std::complex<double> kloosterman(i64 a, i64 b, u64 c) {
  if (c == 0 || c > 1'000'000) throw Error(Errc::PreconditionViolated, "modulus must lie in [1, 1e6]");
  const i64 ci = static_cast<i64>(c);
  const i64 ar = ((a % ci) + ci) % ci, br = ((b % ci) + ci) % ci;
  CompensatedComplexSum s;
  for (u64 m = 0; m < c; ++m) {
    if (std::gcd(m, c) != 1) continue;
    u64 inv = mod_inv(static_cast<i64>(m), c);
    i64 num = static_cast<i64>((mul_mod(static_cast<u64>(ar), m, c) + mul_mod(static_cast<u64>(br), inv, c)) % c);
    s.add(unit_phase(num, ci));
  }
  return s.value();
}

TrilinearResult trilinear_B(const TrilinearSpec& spec) {
  if (spec.M > 200 || spec.N > 200 || spec.A > 200) throw Error(Errc::SizeTooLarge, "trilinear sizes capped at 200");
  if (spec.theta == 0) throw Error(Errc::PreconditionViolated, "theta must be non-zero");
  auto range = [](double X) { return std::pair<long, long>{static_cast<long>(std::ceil(X / 2)), static_cast<long>(std::floor(X))}; };
  auto [m_lo, m_hi] = range(spec.M);
  auto [n_lo, n_hi] = range(spec.N);
  auto [a_lo, a_hi] = range(spec.A);
  auto norm = [](long lo, long hi, const std::function<std::complex<double>(long)>& s) {
    CompensatedSum acc;
    for (long i = lo; i <= hi; ++i) acc.add(std::norm(s(i)));
    return std::sqrt(acc.value());
  };
  CompensatedComplexSum total;
  for (long a = a_lo; a <= a_hi; ++a) {
    auto nu = spec.nu(a);
    if (nu == 0.0) continue;
    for (long m = m_lo; m <= m_hi; ++m) {
      auto al = spec.alpha(m);
      if (al == 0.0) continue;
      for (long n = n_lo; n <= n_hi; ++n) {
        if (std::gcd(m, n) != 1) continue;
        auto be = spec.beta(n);
        if (be == 0.0) continue;
        i64 inv = static_cast<i64>(mod_inv(m, static_cast<u64>(n)));
        i64 t = ((spec.theta % n) + n) % n;
        i64 num = (t * (a % n) % n) * inv % n;
        total.add(al * be * nu * unit_phase(num, n));
      }
    }
  }
  const double eps = 0.01;
  const double AMN = spec.A * spec.M * spec.N;
  double rhs = norm(m_lo, m_hi, spec.alpha) * norm(n_lo, n_hi, spec.beta) * norm(a_lo, a_hi, spec.nu) *
               std::sqrt(1.0 + std::fabs(static_cast<double>(spec.theta)) * spec.A / (spec.M * spec.N)) *
               (std::pow(AMN, 7.0 / 20 + eps) * std::pow(spec.M + spec.N, 0.25) +
                std::pow(AMN, 3.0 / 8 + eps) * std::pow(spec.A * spec.M + spec.A * spec.N, 0.125));
  TrilinearResult res;
  res.value = total.value();
  res.rhs = rhs;
  res.bound_ratio = rhs > 0 ? std::abs(res.value) / rhs : 0.0;
  return res;
}

std::vector<Lemma11Case> lemma11_standard_cases(u64 seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> small(-5, 5);
  auto random_coeff = [&](std::size_t n) {
    std::vector<long> c(n);
    for (auto& v : c) v = small(rng);
    return c;
  };
  // exp(-(x+y+z)/s): each partial multiplies by -1/s
  auto exp_field = [](unsigned dim, double s) {
    return SmoothField{dim, [dim, s](const std::array<double, 3>& x, unsigned mask) {
                         double sum = 0.0;
                         for (unsigned i = 0; i < dim; ++i) sum += x[i];
                         return std::pow(-1.0 / s, __builtin_popcount(mask)) * std::exp(-sum / s);
                       }};
  };
  std::vector<Lemma11Case> out;

  SmoothField square{1, [](const std::array<double, 3>& x, unsigned mask) { return mask ? 2.0 * x[0] : x[0] * x[0]; }};
  out.push_back({"m1_ones_square", 1, std::vector<long>(25, 1), square, {0, 0, 0}, {25, 0, 0}});
  SmoothField wave{1, [](const std::array<double, 3>& x, unsigned mask) {
                     return mask ? std::cos(x[0] / 3) / 3 : std::sin(x[0] / 3);
                   }};
  out.push_back({"m1_random_sine", 1, random_coeff(30), wave, {4, 0, 0}, {34, 0, 0}});

  out.push_back({"m2_random_exp", 2, random_coeff(12 * 10), exp_field(2, 20.0), {0, 0, 0}, {12, 10, 0}});
  // 1/(1+x+y): d/dx = -1/(1+x+y)^2, d2/dxdy = 2/(1+x+y)^3
  SmoothField rational{2, [](const std::array<double, 3>& x, unsigned mask) {
                         double u = 1.0 + x[0] + x[1];
                         switch (__builtin_popcount(mask)) {
                           case 0: return 1.0 / u;
                           case 1: return -1.0 / (u * u);
                           default: return 2.0 / (u * u * u);
                         }
                       }};
  out.push_back({"m2_random_rational", 2, random_coeff(8 * 9), rational, {2, 5, 0}, {10, 14, 0}});

  out.push_back({"m3_zero", 3, std::vector<long>(4 * 4 * 4, 0), exp_field(3, 10.0), {0, 0, 0}, {4, 4, 4}});
  out.push_back({"m3_random_exp", 3, random_coeff(6 * 5 * 4), exp_field(3, 10.0), {1, 0, 2}, {7, 5, 6}});
  return out;
}

TrilinearSweep trilinear_sweep(std::size_t points, u64 seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> size(8, 64), theta(-5, 4);
  std::uniform_real_distribution<double> turn(0.0, 1.0);
  auto unimodular = [&](long len) {
    std::vector<std::complex<double>> v(static_cast<std::size_t>(len) + 1);
    for (auto& z : v) z = unit_phase(turn(rng));
    return [v](long i) { return v[static_cast<std::size_t>(i)]; };
  };
  TrilinearSweep out;
  for (std::size_t i = 0; i < points; ++i) {
    TrilinearSpec spec;
    spec.M = static_cast<double>(size(rng));
    spec.N = static_cast<double>(size(rng));
    spec.A = static_cast<double>(size(rng));
    long th = theta(rng);
    spec.theta = th >= 0 ? th + 1 : th;
    spec.alpha = unimodular(static_cast<long>(spec.M));
    spec.beta = unimodular(static_cast<long>(spec.N));
    spec.nu = unimodular(static_cast<long>(spec.A));
    auto r = trilinear_B(spec);
    ++out.points;
    if (!std::isfinite(r.bound_ratio)) out.all_finite = false;
    else out.max_ratio = std::max(out.max_ratio, r.bound_ratio);
  }
  return out;
}

ShiuDiagnostic shiu_diagnostic(u64 x, u64 q, u64 a) {
  if (x < 16 || std::gcd(a, q) != 1) throw Error(Errc::PreconditionViolated, "need x >= 16 and gcd(a, q) = 1");
  ShiuDiagnostic d;
  d.x = x;
  d.q = q;
  d.a = a;
  const u64 y = x / 2;
  auto table = sieve_h(x - y + 1, x + 1);
  CompensatedSum lhs;
  for (u64 n = x - y + 1; n <= x; ++n)
    if (n % q == a % q) lhs.add(table.h(n));
  CompensatedSum prime_sum;
  primes_upto(x).for_each([&](u64 p) {
    if (q % p == 0) return;
    double hp = p == 2 ? 1.0 : (p % 4 == 1 ? 2.0 : 0.0);
    prime_sum.add(hp / static_cast<double>(p));
  });
  d.lhs = lhs.value();
  d.rhs_without_constant = static_cast<double>(y) / static_cast<double>(euler_phi(q)) /
                           std::log(static_cast<double>(x)) * std::exp(prime_sum.value());
  d.ratio = d.lhs / d.rhs_without_constant;
  return d;
}

RichertHalberstamDiagnostic richert_halberstam_diagnostic(u64 x) {
  if (x < 16) throw Error(Errc::PreconditionViolated, "need x >= 16");
  RichertHalberstamDiagnostic d;
  d.x = x;
  auto table = sieve_h(1, x + 1);
  CompensatedSum total, harmonic;
  for (u64 n = 1; n <= x; ++n) {
    std::uint32_t h = table.h(n);
    if (!h) continue;
    total.add(1.0 / h);
    harmonic.add(1.0 / (static_cast<double>(h) * static_cast<double>(n)));
  }
  d.lhs = total.value();
  d.rhs_without_constant = static_cast<double>(x) / std::log(static_cast<double>(x)) * harmonic.value();
  d.ratio = d.lhs / d.rhs_without_constant;

  CompensatedSum theta, b_sum;
  primes_upto(x).for_each([&](u64 p) {
    double lp = std::log(static_cast<double>(p));
    double fp = p == 2 ? 1.0 : (p % 4 == 1 ? 0.5 : 0.0);
    theta.add(fp * lp);
    d.empirical_A = std::max(d.empirical_A, theta.value() / static_cast<double>(p));
    double pk = static_cast<double>(p) * static_cast<double>(p);
    for (unsigned nu = 2; pk <= static_cast<double>(x); ++nu, pk *= static_cast<double>(p)) {
      double f = p == 2 ? 1.0 : (p % 4 == 1 ? 1.0 / (nu + 1) : (nu % 2 == 0 ? 1.0 : 0.0));
      b_sum.add(f * nu * lp / pk);
    }
  });
  d.empirical_B = b_sum.value();
  return d;
}

}  // namespace tsrl
