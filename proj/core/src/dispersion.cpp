#include "tsrl/dispersion.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "tsrl/errors.hpp"
#include "tsrl/numeric.hpp"
#include "tsrl/smooth.hpp"

namespace tsrl {
namespace {

constexpr double kWorkCap = 4e8;

void check_work(double work, const char* what) {
  if (work > kWorkCap) throw Error(Errc::SizeTooLarge, std::string(what) + " exceeds the direct-loop work cap");
}

// psi(m/M) over its support, m in (M/2, 5M/2)
struct PsiTable {
  u64 lo = 0;
  std::vector<double> w;

  explicit PsiTable(u64 M) {
    lo = M / 2 + 1;
    u64 hi = (5 * M + 1) / 2;
    for (u64 m = lo; m <= hi; ++m) w.push_back(psi(static_cast<double>(m) / static_cast<double>(M)));
  }
};

std::vector<u64> odd_moduli(const DispersionParams& p) {
  std::vector<u64> out;
  for (u64 d = p.D + 1; d <= 2 * p.D; ++d)
    if (d % 2 == 1) out.push_back(d);
  return out;
}

// sum of b(n) over n ~ N coprime to d
std::complex<double> coprime_b(const WeightPair& w, u64 d) {
  CompensatedComplexSum s;
  for (std::size_t i = 0; i < w.b.size(); ++i) {
    if (w.b[i] == 0.0) continue;
    if (std::gcd(w.n_lo + i, d) == 1) s.add(w.b[i]);
  }
  return s.value();
}

double phi_d(u64 d) { return static_cast<double>(euler_phi(d)); }

}  // namespace

void validate(const DispersionParams& p) {
  if (p.D == 0 || p.N == 0 || p.M == 0) throw Error(Errc::PreconditionViolated, "D, N, M must be positive");
  if (p.N > p.M) throw Error(Errc::PreconditionViolated, "need N <= M");
  if (p.D > 1000 || p.N > 1000 || p.M > 100'000) throw Error(Errc::PreconditionViolated, "need D, N <= 1e3 and M <= 1e5");
  if (p.k == 0) throw Error(Errc::PreconditionViolated, "k must be positive");
  if (p.J1 > p.J2) throw Error(Errc::PreconditionViolated, "need J1 <= J2");
}

WeightPair build_weights(const DispersionParams& p) {
  validate(p);
  WeightPair w;
  w.m_lo = p.M + 1;
  w.n_lo = p.N + 1;
  auto in_j = [&](u64 q) { return q > p.J1 && q <= p.J2; };
  for (u64 m = p.M + 1; m <= 2 * p.M; ++m) {
    std::complex<double> v = 0.0;
    if (m <= p.x_cap) {
      auto f = factorize(m);
      std::uint32_t h = h_of(f);
      unsigned j_primes = 0;
      bool square_j = false;
      for (const auto& pe : f.factors) {
        if (!in_j(pe.prime)) continue;
        ++j_primes;
        if (pe.exponent > 1) square_j = true;
      }
      if (h != 0 && !square_j && j_primes + 1 == p.k) {
        v = std::polar(1.0 / h, -p.t * std::log(static_cast<double>(m)));
      }
    }
    w.a.push_back(v);
  }
  for (u64 n = p.N + 1; n <= 2 * p.N; ++n) {
    std::complex<double> v = 0.0;
    if (in_j(n) && n % 4 == 1 && is_prime(n)) v = std::polar(1.0, -p.t * std::log(static_cast<double>(n)));
    w.b.push_back(v);
  }
  return w;
}

std::complex<double> u_tilde(const DispersionParams& p) { return u_tilde(p, build_weights(p)); }

std::complex<double> u_tilde(const DispersionParams& p, const WeightPair& w) {
  validate(p);
  check_work(static_cast<double>(p.N) * static_cast<double>(p.M) + static_cast<double>(p.D) * (p.N + p.M), "u_tilde");
  CompensatedComplexSum total;
  for (u64 d : odd_moduli(p)) {
    int c = chi4(static_cast<i64>(d));
    CompensatedComplexSum congruent;
    for (std::size_t j = 0; j < w.b.size(); ++j) {
      if (w.b[j] == 0.0) continue;
      u64 n = w.n_lo + j;
      if (std::gcd(n, d) != 1) continue;
      u64 r = mod_inv(static_cast<i64>(n % d), d);
      u64 m = w.m_lo + (r + d - w.m_lo % d) % d;
      for (; m < w.m_lo + w.a.size(); m += d) congruent.add(w.a[m - w.m_lo] * w.b[j]);
    }
    CompensatedComplexSum am;
    for (std::size_t i = 0; i < w.a.size(); ++i)
      if (w.a[i] != 0.0 && std::gcd(w.m_lo + i, d) == 1) am.add(w.a[i]);
    auto expected = am.value() * coprime_b(w, d) / phi_d(d);
    total.add(static_cast<double>(c) * (congruent.value() - expected));
  }
  return total.value();
}

WVU w_v_u(const DispersionParams& p) { return w_v_u(p, build_weights(p)); }

WVU w_v_u(const DispersionParams& p, const WeightPair& w) {
  validate(p);
  PsiTable psi_tab(p.M);
  auto mods = odd_moduli(p);
  check_work(static_cast<double>(psi_tab.w.size()) * (static_cast<double>(mods.size()) * 4 + p.N), "w_v_u");
  std::vector<std::complex<double>> bc(mods.size());
  std::vector<double> phis(mods.size());
  for (std::size_t i = 0; i < mods.size(); ++i) {
    bc[i] = coprime_b(w, mods[i]);
    phis[i] = phi_d(mods[i]);
  }
  CompensatedComplexSum W, V, U;
  for (std::size_t mi = 0; mi < psi_tab.w.size(); ++mi) {
    double weight = psi_tab.w[mi];
    if (weight == 0.0) continue;
    u64 m = psi_tab.lo + mi;
    CompensatedComplexSum s1, s2;
    for (std::size_t i = 0; i < mods.size(); ++i) {
      u64 d = mods[i];
      if (std::gcd(m, d) != 1) continue;
      double c = chi4(static_cast<i64>(d));
      s2.add(c * bc[i] / phis[i]);
      u64 r = mod_inv(static_cast<i64>(m % d), d);
      u64 n = w.n_lo + (r + d - w.n_lo % d) % d;
      CompensatedComplexSum inner;
      for (; n < w.n_lo + w.b.size(); n += d) inner.add(w.b[n - w.n_lo]);
      s1.add(c * inner.value());
    }
    auto S1 = s1.value(), S2 = s2.value();
    W.add(weight * std::norm(S1));
    V.add(weight * S1 * std::conj(S2));
    U.add(weight * std::norm(S2));
  }
  return {W.value(), V.value(), U.value()};
}

std::complex<double> u_by_divisor_pairs(const DispersionParams& p) { return u_by_divisor_pairs(p, build_weights(p)); }

std::complex<double> u_by_divisor_pairs(const DispersionParams& p, const WeightPair& w) {
  validate(p);
  PsiTable psi_tab(p.M);
  auto mods = odd_moduli(p);
  check_work(static_cast<double>(mods.size()) * mods.size() * psi_tab.w.size(), "u_by_divisor_pairs");
  CompensatedComplexSum total;
  for (u64 d1 : mods) {
    auto b1 = coprime_b(w, d1);
    for (u64 d2 : mods) {
      auto b2 = coprime_b(w, d2);
      CompensatedSum msum;
      for (std::size_t i = 0; i < psi_tab.w.size(); ++i) {
        u64 m = psi_tab.lo + i;
        if (std::gcd(m, d1) == 1 && std::gcd(m, d2) == 1) msum.add(psi_tab.w[i]);
      }
      double c = chi4(static_cast<i64>(d1)) * chi4(static_cast<i64>(d2)) / (phi_d(d1) * phi_d(d2));
      total.add(c * b1 * std::conj(b2) * msum.value());
    }
  }
  return total.value();
}

std::complex<double> u_by_gcd_regrouping(const DispersionParams& p) { return u_by_gcd_regrouping(p, build_weights(p)); }

std::complex<double> u_by_gcd_regrouping(const DispersionParams& p, const WeightPair& w) {
  validate(p);
  PsiTable psi_tab(p.M);
  // multiples[e] = sum of psi(m/M) over e | m; coprime sums follow by inclusion-exclusion on rad(q).
  std::vector<double> multiples(4 * p.D * p.D + 1, std::nan(""));
  auto multiple_sum = [&](u64 e) {
    if (e >= multiples.size()) {
      CompensatedSum s;
      for (std::size_t i = 0; i < psi_tab.w.size(); ++i)
        if ((psi_tab.lo + i) % e == 0) s.add(psi_tab.w[i]);
      return s.value();
    }
    double& slot = multiples[e];
    if (std::isnan(slot)) {
      CompensatedSum s;
      u64 first = (psi_tab.lo + e - 1) / e * e;
      for (u64 m = first; m < psi_tab.lo + psi_tab.w.size(); m += e) s.add(psi_tab.w[m - psi_tab.lo]);
      slot = s.value();
    }
    return slot;
  };
  auto coprime_psi = [&](u64 q) {
    auto f = factorize(q);
    CompensatedSum s;
    std::size_t k = f.factors.size();
    for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
      u64 e = 1;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) e *= f.factors[i].prime;
      double v = multiple_sum(e);
      s.add(__builtin_popcountll(mask) % 2 ? -v : v);
    }
    return s.value();
  };
  CompensatedComplexSum total;
  for (u64 delta = 1; delta <= 2 * p.D; delta += 2) {
    u64 k_lo = p.D / delta + 1, k_hi = 2 * p.D / delta;
    for (u64 k1 = k_lo; k1 <= k_hi; ++k1) {
      u64 d1 = delta * k1;
      if (d1 % 2 == 0) continue;
      auto b1 = coprime_b(w, d1);
      for (u64 k2 = k_lo; k2 <= k_hi; ++k2) {
        u64 d2 = delta * k2;
        if (d2 % 2 == 0 || std::gcd(k1, k2) != 1) continue;
        auto b2 = coprime_b(w, d2);
        double c = chi4(static_cast<i64>(d1)) * chi4(static_cast<i64>(d2)) / (phi_d(d1) * phi_d(d2));
        total.add(c * b1 * std::conj(b2) * coprime_psi(delta * k1 * k2));
      }
    }
  }
  return total.value();
}

std::complex<double> u_mt(const DispersionParams& p) { return u_mt(p, build_weights(p)); }

std::complex<double> u_mt(const DispersionParams& p, const WeightPair& w) {
  validate(p);
  const double mass = static_cast<double>(p.M) * psi_hat(0.0).value.real();
  CompensatedComplexSum total;
  for (u64 delta = 1; delta <= 2 * p.D; delta += 2) {
    u64 k_lo = p.D / delta + 1, k_hi = 2 * p.D / delta;
    if (k_lo > k_hi) continue;
    std::vector<std::complex<double>> bsum(k_hi - k_lo + 1);
    for (u64 k = k_lo; k <= k_hi; ++k) bsum[k - k_lo] = coprime_b(w, delta * k);
    CompensatedComplexSum inner;
    for (u64 k1 = k_lo; k1 <= k_hi; ++k1) {
      int c1 = chi4(static_cast<i64>(k1));
      if (c1 == 0) continue;
      for (u64 k2 = k_lo; k2 <= k_hi; ++k2) {
        int c2 = chi4(static_cast<i64>(k2));
        if (c2 == 0 || std::gcd(k1, k2) != 1) continue;
        inner.add(static_cast<double>(c1 * c2) / static_cast<double>(k1 * k2) * bsum[k1 - k_lo] *
                  std::conj(bsum[k2 - k_lo]));
      }
    }
    total.add(inner.value() / (static_cast<double>(delta) * phi_d(delta)));
  }
  return mass * total.value();
}

InequalityCheck dispersion_inequality_check(const DispersionParams& p) {
  return dispersion_inequality_check(p, build_weights(p));
}

InequalityCheck dispersion_inequality_check(const DispersionParams& p, const WeightPair& w) {
  auto ut = u_tilde(p, w);
  auto wvu = w_v_u(p, w);
  InequalityCheck out;
  CompensatedSum a2;
  for (auto v : w.a) a2.add(std::norm(v));
  out.a_norm_sq = a2.value();
  out.variance_form = (wvu.W - 2.0 * wvu.V.real() + wvu.U).real();
  out.lhs = std::norm(ut);
  out.rhs = out.a_norm_sq * out.variance_form;
  // Rounding slack scaled to the size of the summands on the right.
  double scale = out.a_norm_sq * (std::abs(wvu.W) + 2.0 * std::abs(wvu.V) + std::abs(wvu.U));
  out.ok = out.variance_form >= -1e-9 * std::max(scale, 1.0) && out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-12 * scale;
  return out;
}

std::complex<double> w_mt(const DispersionParams& p, double X) { return w_mt(p, build_weights(p), X); }

std::complex<double> w_mt(const DispersionParams& p, const WeightPair& w, double X) {
  validate(p);
  if (X > 2.0 * static_cast<double>(p.D)) throw Error(Errc::PreconditionViolated, "need X <= 2D");
  const double mass = static_cast<double>(p.M) * psi_hat(0.0).value.real();
  CompensatedComplexSum total;
  for (u64 delta = 1; static_cast<double>(delta) <= X && delta <= 2 * p.D; delta += 2) {
    u64 k_lo = p.D / delta + 1, k_hi = 2 * p.D / delta;
    if (k_lo > k_hi) continue;
    // residue-class sums of b over n coprime to delta*k
    std::vector<std::vector<std::complex<double>>> cls(k_hi - k_lo + 1);
    for (u64 k = k_lo; k <= k_hi; ++k) {
      auto& v = cls[k - k_lo];
      v.assign(delta, 0.0);
      for (std::size_t j = 0; j < w.b.size(); ++j) {
        u64 n = w.n_lo + j;
        if (w.b[j] != 0.0 && std::gcd(n, delta * k) == 1) v[n % delta] += w.b[j];
      }
    }
    CompensatedComplexSum inner;
    for (u64 k1 = k_lo; k1 <= k_hi; ++k1) {
      int c1 = chi4(static_cast<i64>(k1));
      if (c1 == 0) continue;
      for (u64 k2 = k_lo; k2 <= k_hi; ++k2) {
        int c2 = chi4(static_cast<i64>(k2));
        if (c2 == 0 || std::gcd(k1, k2) != 1) continue;
        std::complex<double> pair = 0.0;
        for (u64 r = 0; r < delta; ++r) pair += cls[k1 - k_lo][r] * std::conj(cls[k2 - k_lo][r]);
        inner.add(static_cast<double>(c1 * c2) / static_cast<double>(k1 * k2) * pair);
      }
    }
    total.add(inner.value() / static_cast<double>(delta));
  }
  return mass * total.value();
}

std::vector<DispersionParams> dispersion_param_sweep(std::size_t count, u64 seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(rng); };
  std::vector<DispersionParams> out;
  for (std::size_t i = 0; i < count; ++i) {
    DispersionParams p;
    p.D = pick(3, 24);
    p.N = pick(8, 48);
    p.M = pick(p.N, 160);
    p.t = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    p.k = static_cast<unsigned>(pick(1, 3));
    p.J1 = pick(2, 12);
    p.J2 = pick(std::max(p.J1 + 1, p.N + p.N / 2), 2 * p.N + 8);  // reach into (N, 2N] so b is rarely empty
    p.x_cap = pick(p.M + p.M / 2, 2 * p.M);
    out.push_back(p);
  }
  return out;
}

}  // namespace tsrl
