#include "tsrl/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "tsrl/errors.hpp"
#include "tsrl/parallel.hpp"
#include "tsrl/sieve.hpp"

namespace tsrl {
namespace {

struct Acc {
  CompensatedSum q, s, h, ho;
  u64 terms = 0;
};

struct Totals {
  DoubleDouble q, s, h, ho;
  u64 terms = 0;

  void add(const Acc& a) {
    q += a.q.as_double_double();
    s += a.s.as_double_double();
    h += a.h.as_double_double();
    ho += a.ho.as_double_double();
    terms += a.terms;
  }
};

struct SegmentResult {
  Acc total;
  std::vector<std::pair<std::size_t, Acc>> snapshots;  // checkpoint index, partial
};

ScanPoint to_point(u64 x, const Totals& t) {
  ScanPoint p;
  p.x = x;
  p.q = t.q;
  p.q_terms = t.terms;
  p.s = t.s;
  p.h_all = t.h;
  p.h_odd = t.ho;
  return p;
}

}  // namespace

std::vector<ScanPoint> scan_prefix_sums(const std::vector<u64>& xs, const ScanChannels& channels,
                                        const ScanOptions& options) {
  std::vector<ScanPoint> out(xs.size());
  u64 X = 0;
  for (u64 x : xs) {
    if (x > kFloatSeriesMax) throw Error(Errc::RangeTooLarge, "x above 2e9");
    X = std::max(X, x);
  }
  if (X == 0) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i].x = xs[i];
    return out;
  }
  const u64 seg = options.segment ? options.segment : kDefaultSegment;
  const u64 nseg = (X + seg - 1) / seg;
  const auto base = base_primes_for(X + 2);
  SegmentChannels ch;
  ch.h = channels.q || channels.h;
  ch.tau = channels.s;
  ch.e = channels.h;

  // checkpoint indices sorted by x
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  auto results = ordered_map<SegmentResult>(nseg, options.threads, [&](std::size_t si) {
    const u64 nlo = 1 + si * seg;
    const u64 nhi = std::min(X, nlo + seg - 1);
    SegmentData data;
    sieve_segment(nlo, nhi + 2, base, ch, data);
    SegmentResult res;
    auto cp = std::lower_bound(order.begin(), order.end(), nlo, [&](std::size_t i, u64 v) { return xs[i] < v; });
    Acc acc;
    for (u64 n = nlo; n <= nhi; ++n) {
      const std::size_t i = static_cast<std::size_t>(n - nlo);
      if (channels.q && data.h[i + 1] != 0) {
        acc.q.add(static_cast<double>(data.h[i]) / static_cast<double>(data.h[i + 1]));
        ++acc.terms;
      }
      if (channels.s) acc.s.add(static_cast<double>(data.tau[i]) / static_cast<double>(data.tau[i + 1]));
      if (channels.h && data.h[i] != 0) {
        double v = data.e[i] / static_cast<double>(data.h[i]);
        acc.h.add(v);
        if (n & 1) acc.ho.add(v);
      }
      while (cp != order.end() && xs[*cp] == n) {
        res.snapshots.emplace_back(*cp, acc);
        ++cp;
      }
    }
    res.total = acc;
    return res;
  });

  Totals running;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0) out[i] = to_point(0, Totals{});
  }
  for (const auto& r : results) {
    for (const auto& [idx, partial] : r.snapshots) {
      Totals t = running;
      t.add(partial);
      out[idx] = to_point(xs[idx], t);
    }
    running.add(r.total);
  }
  return out;
}

PartialSum q_of_x(u64 x, bool exact, const ScanOptions& options) {
  PartialSum ps;
  ps.x = x;
  if (exact) {
    if (x > kExactSeriesMax) throw Error(Errc::RangeTooLarge, "exact mode limited to x <= 1e6");
    if (x == 0) {
      ps.exact = Rational(0);
      return ps;
    }
    auto table = sieve_h(1, x + 2);
    // Group numerators by denominator so the rational reduction happens once per value of h(n+1).
    std::map<std::uint32_t, u64> by_den;
    for (u64 n = 1; n <= x; ++n) {
      std::uint32_t den = table.h(n + 1);
      if (den == 0) continue;
      by_den[den] += table.h(n);
      ++ps.terms_used;
    }
    Rational total(0);
    for (const auto& [den, num] : by_den) {
      Rational term(mpz_class(std::to_string(num)), mpz_class(den));
      term.canonicalize();
      total += term;
    }
    ps.exact = total;
    ps.value = total.get_d();
    ps.value_dd = two_sum(ps.value, Rational(total - Rational(ps.value)).get_d());
    return ps;
  }
  auto pts = scan_prefix_sums({x}, ScanChannels{true, false, false}, options);
  ps.value_dd = pts[0].q;
  ps.value = pts[0].q.value();
  ps.terms_used = pts[0].q_terms;
  return ps;
}

PartialSum s_of_x(u64 x, const ScanOptions& options) {
  auto pts = scan_prefix_sums({x}, ScanChannels{false, true, false}, options);
  PartialSum ps;
  ps.x = x;
  ps.value_dd = pts[0].s;
  ps.value = pts[0].s.value();
  ps.terms_used = x;
  return ps;
}

double q_normalized(double q, u64 x) {
  if (x < 2) return 0.0;
  double L = std::log(static_cast<double>(x));
  return q * std::pow(L, 0.75) / static_cast<double>(x);
}

namespace {

std::pair<double, double> cuts(u64 x, double A) {
  double L = std::log(static_cast<double>(x));
  double root = std::sqrt(static_cast<double>(x));
  if (L <= 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  return {root * std::pow(L, -A), root * std::pow(L, A)};
}

std::vector<std::uint32_t> smallest_prime_factors(u64 limit) {
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (u64 i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || static_cast<u64>(p) * i > limit) break;
      spf[static_cast<std::size_t>(p * i)] = p;
    }
  }
  return spf;
}

}  // namespace

QDecomposition q_decomposition(u64 x, double A) {
  if (x > kDivisorSeriesMax) throw Error(Errc::RangeTooLarge, "decomposition limited to x <= 1e7");
  if (!(A > 0.0)) throw Error(Errc::PreconditionViolated, "A must be positive");
  QDecomposition out;
  out.x = x;
  out.A = A;
  if (x == 0) return out;
  auto [lo_cut, hi_cut] = cuts(x, A);
  out.lower_cut = lo_cut;
  out.upper_cut = hi_cut;
  auto spf = smallest_prime_factors(x);
  auto table = sieve_h(1, x + 2);
  std::map<std::uint32_t, std::array<i64, 3>> by_den;
  std::vector<u64> divs;
  for (u64 n = 1; n <= x; ++n) {
    std::uint32_t den = table.h(n + 1);
    if (den == 0) continue;
    // odd divisors only: chi4 vanishes on even d
    u64 m = n;
    while (m % 2 == 0) m /= 2;
    divs.assign(1, 1);
    while (m > 1) {
      u64 p = spf[m];
      unsigned e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      std::size_t base = divs.size();
      u64 pk = 1;
      for (unsigned k = 1; k <= e; ++k) {
        pk *= p;
        for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
      }
    }
    std::array<i64, 3> c{0, 0, 0};
    for (u64 d : divs) {
      double dd = static_cast<double>(d);
      int cls = dd <= lo_cut ? 0 : (dd <= hi_cut ? 1 : 2);
      c[cls] += chi4(static_cast<i64>(d));
    }
    auto& slot = by_den[den];
    for (int i = 0; i < 3; ++i) slot[i] += c[i];
  }
  Rational parts[3] = {Rational(0), Rational(0), Rational(0)};
  for (const auto& [den, nums] : by_den) {
    for (int i = 0; i < 3; ++i) {
      Rational term(mpz_class(std::to_string(nums[i])), mpz_class(den));
      term.canonicalize();
      parts[i] += term;
    }
  }
  out.q1 = parts[0];
  out.q2 = parts[1];
  out.q3 = parts[2];
  return out;
}

double qerr2_direct(u64 x, double A) {
  if (x > kDivisorSeriesMax) throw Error(Errc::RangeTooLarge, "qerr2 limited to x <= 1e7");
  if (!(A > 0.0)) throw Error(Errc::PreconditionViolated, "A must be positive");
  if (x == 0) return 0.0;
  auto [lo_cut, hi_cut] = cuts(x, A);
  if (!(lo_cut < hi_cut)) return 0.0;
  const u64 d_lo = static_cast<u64>(std::floor(lo_cut)) + 1;
  const u64 d_hi = static_cast<u64>(std::floor(hi_cut));
  constexpr u64 kMaxModulus = 50'000'000;
  if (d_hi > kMaxModulus) throw Error(Errc::RangeTooLarge, "divisor range above 5e7; lower A");
  if (d_lo > d_hi) return 0.0;

  auto table = sieve_h(1, x + 1);
  std::vector<double> inv_h(x + 1, 0.0);
  for (u64 n = 1; n <= x; ++n) {
    std::uint32_t h = table.h(n);
    if (h) inv_h[n] = 1.0 / static_cast<double>(h);
  }
  // multiples_sum[e] = sum over n <= x with e | n of 1/h(n), filled lazily
  std::vector<double> multiples_sum(std::min(d_hi, x) + 1, std::numeric_limits<double>::quiet_NaN());
  auto multiples = [&](u64 e) {
    if (e > x) return 0.0;
    double& slot = multiples_sum[e];
    if (std::isnan(slot)) {
      CompensatedSum s;
      for (u64 n = e; n <= x; n += e) s.add(inv_h[n]);
      slot = s.value();
    }
    return slot;
  };

  CompensatedSum total;
  std::vector<u64> rad_primes;
  for (u64 d = d_lo; d <= d_hi; ++d) {
    int c = chi4(static_cast<i64>(d));
    if (c == 0) continue;
    CompensatedSum prog;
    for (u64 n = 1; n <= x; n += d) prog.add(inv_h[n]);
    auto f = factorize(d);
    rad_primes.clear();
    for (const auto& pe : f.factors) rad_primes.push_back(pe.prime);
    CompensatedSum coprime;
    const std::size_t k = rad_primes.size();
    for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
      u64 e = 1;
      bool over = false;
      for (std::size_t i = 0; i < k && !over; ++i) {
        if (mask >> i & 1) {
          e *= rad_primes[i];
          if (e > x) over = true;
        }
      }
      if (over) continue;
      double v = multiples(e);
      coprime.add(__builtin_popcountll(mask) % 2 ? -v : v);
    }
    double phi = static_cast<double>(euler_phi(f));
    total.add(c * (prog.value() - coprime.value() / phi));
  }
  return total.value();
}

}  // namespace tsrl
