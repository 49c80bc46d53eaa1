#include "tsrl/mainterm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "tsrl/constants.hpp"
#include "tsrl/errors.hpp"
#include "tsrl/numeric.hpp"

namespace tsrl {
namespace {

u64 floor_arg(double x) {
  if (!(x >= 1.0)) return 0;
  if (x > static_cast<double>(kFloatSeriesMax)) throw Error(Errc::RangeTooLarge, "H is sieve-backed up to 2e9");
  return static_cast<u64>(std::floor(x));
}

// lo/hi of pi*c/4
std::pair<double, double> prefactor_bounds() {
  auto c = c_constant();
  return {std::numbers::pi * c.interval_lo / 4.0, std::numbers::pi * c.interval_hi / 4.0};
}

double to_double(const DoubleDouble& v) { return v.hi + v.lo; }

}  // namespace

Rational E_of(const Factorization& f) {
  Rational e = 1;
  for (const auto& pe : f.factors) {
    mpz_class p = static_cast<unsigned long>(pe.prime);
    if (pe.prime % 4 == 1) e *= Rational((p - 1) * (p - 1), p * p - p + 1);
    else if (pe.prime % 4 == 3) e *= Rational(p * p - 1, p * p - p - 1);
  }
  e.canonicalize();
  return e;
}

Rational E_of(u64 n) { return E_of(factorize(n)); }

DoubleDouble H_of_dd(double x, bool odd_only, const ScanOptions& options) {
  u64 n = floor_arg(x);
  if (n == 0) return {};
  auto pts = scan_prefix_sums({n}, ScanChannels{false, false, true}, options);
  return odd_only ? pts[0].h_odd : pts[0].h_all;
}

double H_of(double x, bool odd_only, const ScanOptions& options) { return to_double(H_of_dd(x, odd_only, options)); }

double q_mt_prefactor() { return std::numbers::pi * c_constant().value / 4.0; }

namespace {

// H(x) + H(x/2) - 2H(x/4) from one pass
double q_mt_bracket(double x, const ScanOptions& options) {
  std::vector<u64> xs;
  for (double y : {x, x / 2, x / 4}) xs.push_back(floor_arg(y));
  std::vector<u64> nonzero;
  for (u64 v : xs)
    if (v) nonzero.push_back(v);
  std::vector<ScanPoint> pts;
  if (!nonzero.empty()) pts = scan_prefix_sums(nonzero, ScanChannels{false, false, true}, options);
  auto lookup = [&](u64 v) {
    for (const auto& p : pts)
      if (p.x == v) return p.h_all;
    return DoubleDouble{};
  };
  DoubleDouble acc = lookup(xs[0]);
  acc += lookup(xs[1]);
  DoubleDouble q = lookup(xs[2]);
  acc += DoubleDouble{-2.0 * q.hi, -2.0 * q.lo};
  return to_double(acc);
}

}  // namespace

double q_mt(double x, const ScanOptions& options) { return q_mt_prefactor() * q_mt_bracket(x, options); }

double q_mt_interval_halfwidth(double x, const ScanOptions& options) {
  auto [lo, hi] = prefactor_bounds();
  return 0.5 * (hi - lo) * std::abs(q_mt_bracket(x, options));
}

double h_asymptotic(double x) {
  if (!(x >= 3.0)) throw Error(Errc::PreconditionViolated, "h_asymptotic needs x >= 3");
  return g_at_one().value / gamma_quarter() * x / std::pow(std::log(x), 0.75);
}

std::vector<MainTermReport> main_term_reports(const std::vector<u64>& xs, const ScanOptions& options) {
  std::vector<u64> all;
  for (u64 x : xs) {
    if (x == 0) throw Error(Errc::PreconditionViolated, "x must be positive");
    for (u64 v : {x, x / 2, x / 4})
      if (v) all.push_back(v);
  }
  auto pts = scan_prefix_sums(all, ScanChannels{true, false, true}, options);
  auto at = [&](u64 v) -> const ScanPoint* {
    for (const auto& p : pts)
      if (p.x == v) return &p;
    return nullptr;
  };
  auto h_at = [&](u64 v) { return v ? to_double(at(v)->h_all) : 0.0; };
  auto [pre_lo, pre_hi] = prefactor_bounds();
  const double pre = q_mt_prefactor();

  std::vector<MainTermReport> out;
  for (u64 x : xs) {
    MainTermReport r;
    r.x = x;
    r.H = h_at(x);
    r.H_half = h_at(x / 2);
    r.H_quarter = h_at(x / 4);
    r.q_direct = to_double(at(x)->q);
    double bracket = r.H + r.H_half - 2.0 * r.H_quarter;
    r.q_mt = pre * bracket;
    r.q_mt_halfwidth = 0.5 * (pre_hi - pre_lo) * std::abs(bracket);
    r.h_asymptotic = x >= 3 ? h_asymptotic(static_cast<double>(x)) : std::nan("");
    r.ratio_q = r.q_direct / r.q_mt;
    r.ratio_h = r.H / r.h_asymptotic;
    out.push_back(r);
  }
  return out;
}

void write_main_term_csv(std::ostream& os, const std::vector<MainTermReport>& rows) {
  os << "x,Q,Q_MT,ratio,H,H_asym,ratio_H\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", static_cast<unsigned long long>(r.x),
                  r.q_direct, r.q_mt, r.ratio_q, r.H, r.h_asymptotic, r.ratio_h);
    os << buf;
  }
}

}  // namespace tsrl
