#include "tsrl/constants.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "tsrl/errors.hpp"
#include "tsrl/parallel.hpp"
#include "tsrl/sieve.hpp"

namespace tsrl {
namespace {

constexpr u64 kMinPrimeLimit = 100'000;
constexpr u64 kCalibrationLo = 1'000;
constexpr u64 kCalibrationHi = 10'000;

// sum_{k>=1} u^k / (k (k+1))
double series_s(double u) {
  double sum = 0.0, uk = 1.0;
  for (int k = 1; k < 400; ++k) {
    uk *= u;
    double term = uk / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < 1e-19 * sum) break;
  }
  return sum;
}

// sum_{k>=1} u^k / (k+1)
double series_r(double u) {
  double sum = 0.0, uk = 1.0;
  for (int k = 1; k < 400; ++k) {
    uk *= u;
    double term = uk / (k + 1);
    sum += term;
    if (term < 1e-19 * sum) break;
  }
  return sum;
}

const std::vector<u64>& prime_list(u64 limit) {
  static std::mutex mu;
  static std::map<u64, std::vector<u64>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(limit);
  if (it == cache.end()) it = cache.emplace(limit, primes_upto(limit).to_vector()).first;
  return it->second;
}

using Selector = bool (*)(u64);
bool all_primes(u64) { return true; }
bool one_mod_four(u64 p) { return p % 4 == 1; }
bool three_mod_four(u64 p) { return p % 4 == 3; }

struct ProductSpec {
  const char* name;
  Selector select;
  double (*log_factor)(u64);
  double log_prefactor;
};

EulerProductValue euler_product(const ProductSpec& spec, u64 limit) {
  if (limit < kMinPrimeLimit) throw Error(Errc::PreconditionViolated, "prime limit must be at least 1e5");
  const auto& primes = prime_list(limit);
  constexpr std::size_t kBlock = 1 << 16;
  std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  auto partial = ordered_map<DoubleDouble>(blocks, 0, [&](std::size_t b) {
    CompensatedSum s;
    std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      if (spec.select(primes[i])) s.add(spec.log_factor(primes[i]));
    }
    return s.as_double_double();
  });
  DoubleDouble log_sum{spec.log_prefactor, 0.0};
  for (const auto& p : partial) log_sum += p;

  double c_emp = 0.0;
  for (u64 p : prime_list(kMinPrimeLimit)) {
    if (p < kCalibrationLo) continue;
    if (p > kCalibrationHi) break;
    if (!spec.select(p)) continue;
    double pd = static_cast<double>(p);
    c_emp = std::max(c_emp, std::fabs(spec.log_factor(p)) * pd * pd);
  }

  EulerProductValue v;
  v.name = spec.name;
  v.prime_limit = limit;
  v.log_value = log_sum;
  v.value = std::exp(log_sum.hi) * std::exp(log_sum.lo);
  v.tail_bound = c_emp * prime_square_tail(limit);
  v.interval_lo = v.value * std::exp(-v.tail_bound);
  v.interval_hi = v.value * std::exp(v.tail_bound);
  return v;
}

EulerProductValue memo(const ProductSpec& spec, u64 limit) {
  static std::mutex mu;
  static std::map<std::pair<std::string, u64>, EulerProductValue> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({spec.name, limit});
    if (it != cache.end()) return it->second;
  }
  auto v = euler_product(spec, limit);
  std::lock_guard lock(mu);
  cache.emplace(std::make_pair(std::string(spec.name), limit), v);
  return v;
}

EulerProductValue combine(const std::string& name, double log_prefactor,
                          std::initializer_list<EulerProductValue> parts) {
  EulerProductValue v;
  v.name = name;
  v.log_value = DoubleDouble{log_prefactor, 0.0};
  for (const auto& p : parts) {
    v.log_value += p.log_value;
    v.tail_bound += p.tail_bound;
    v.prime_limit = p.prime_limit;
  }
  v.value = std::exp(v.log_value.hi) * std::exp(v.log_value.lo);
  v.interval_lo = v.value * std::exp(-v.tail_bound);
  v.interval_hi = v.value * std::exp(v.tail_bound);
  return v;
}

}  // namespace

double c1_log_factor(u64 p) {
  double u = 1.0 / static_cast<double>(p);
  return 0.25 * (std::log1p(-u) - std::log1p(u)) + std::log1p(u / (1.0 - u) - series_s(u));
}

double korolev_log_factor(u64 p) {
  double u = 1.0 / static_cast<double>(p);
  return -0.5 * std::log1p(-u) + std::log1p(-series_s(u) * (1.0 - u));
}

double c_log_factor(u64 p) {
  double u = 1.0 / static_cast<double>(p);
  return std::log1p(chi4(static_cast<i64>(p)) * u * u / (1.0 - u));
}

double p1_log_factor(u64 p) {
  double u = 1.0 / static_cast<double>(p);
  double e1 = (1.0 - u) * (1.0 - u) / (1.0 - u + u * u);
  return 0.5 * std::log1p(-u) + std::log1p(e1 * series_r(u));
}

double p3_log_factor(u64 p) {
  double u = 1.0 / static_cast<double>(p);
  return 0.25 * std::log1p(-u * u) + std::log1p(u * u / (1.0 - u - u * u));
}

double p1_inner_series(u64 p) { return series_r(1.0 / static_cast<double>(p)); }

double prime_square_tail(u64 P) {
  double pd = static_cast<double>(P);
  return 2.51012 / (pd * std::log(pd));
}

double gamma_quarter() {
  // Gamma(1/4)^2 = (2 pi)^{3/2} / AGM(1, sqrt 2)
  long double a = 1.0L, b = std::sqrt(2.0L);
  for (int i = 0; i < 64 && std::fabs(a - b) > 1e-19L * a; ++i) {
    long double an = (a + b) / 2.0L;
    b = std::sqrt(a * b);
    a = an;
  }
  long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  return static_cast<double>(std::sqrt(std::pow(two_pi, 1.5L) / a));
}

double l_one_chi4_partial(u64 terms) {
  CompensatedSum s;
  for (u64 k = 0; k < terms; ++k) s.add((k % 2 ? -1.0 : 1.0) / static_cast<double>(2 * k + 1));
  return s.value();
}

double l_one_chi4(u64 terms) {
  if (terms < 1000) throw Error(Errc::PreconditionViolated, "at least 1e3 terms required");
  CompensatedSum s;
  for (u64 k = 0; k < terms; ++k) s.add((k % 2 ? -1.0 : 1.0) / static_cast<double>(2 * k + 1));
  // sum_{k>=N} (-1)^k f(k) = (-1)^N [f/2 - f'/4 + f'''/48 - f^(5)/480 + 17 f^(7)/80640], f(k) = 1/(2k+1)
  double x = 2.0 * static_cast<double>(terms) + 1.0;
  auto deriv = [&](int j) {
    double fact = 1.0;
    for (int i = 2; i <= j; ++i) fact *= i;
    double sign = (j % 2) ? -1.0 : 1.0;
    return sign * fact * std::pow(2.0, j) / std::pow(x, j + 1);
  };
  double tail = deriv(0) / 2 - deriv(1) / 4 + deriv(3) / 48 - deriv(5) / 480 + 17.0 * deriv(7) / 80640;
  s.add((terms % 2 ? -1.0 : 1.0) * tail);
  return s.value();
}

EulerProductValue c1_closed_form(u64 prime_limit) {
  double pre = 0.75 * std::log(std::numbers::pi) - std::log(2.0 * gamma_quarter());
  return memo({"c1_closed_form", one_mod_four, c1_log_factor, pre}, prime_limit);
}

EulerProductValue korolev_K(u64 prime_limit) {
  return memo({"korolev_K", all_primes, korolev_log_factor, -0.5 * std::log(std::numbers::pi)}, prime_limit);
}

EulerProductValue c_constant(u64 prime_limit) {
  return memo({"c", all_primes, c_log_factor, 0.0}, prime_limit);
}

EulerProductValue p1_at_one(u64 prime_limit) {
  return memo({"P1", one_mod_four, p1_log_factor, 0.0}, prime_limit);
}

EulerProductValue p3_at_one(u64 prime_limit) {
  return memo({"P3", three_mod_four, p3_log_factor, 0.0}, prime_limit);
}

EulerProductValue g_at_one(u64 prime_limit) {
  // (1 - 1/2)^{-3/4} L(1, chi4)^{1/4} P1 P3
  double pre = 0.75 * std::log(2.0) + 0.25 * std::log(l_one_chi4());
  return combine("G1", pre, {p1_at_one(prime_limit), p3_at_one(prime_limit)});
}

EulerProductValue c1_via_identity(u64 prime_limit) {
  double pre = std::log(std::numbers::pi / (4.0 * gamma_quarter()));
  return combine("c1_via_identity", pre, {c_constant(prime_limit), g_at_one(prime_limit)});
}

}  // namespace tsrl
