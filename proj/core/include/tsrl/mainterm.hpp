#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tsrl/arith.hpp"
#include "tsrl/series.hpp"

namespace tsrl {

// Local density weight: product over distinct odd p | n of
// (p-1)^2/(p^2-p+1) for p = 1 (mod 4) and (p^2-1)/(p^2-p-1) for p = 3 (mod 4).
Rational E_of(const Factorization& f);
Rational E_of(u64 n);

// Sum of E(n)/h(n) over n <= floor(x) with h(n) != 0; zero for x < 1. Throws RangeTooLarge.
double H_of(double x, bool odd_only = false, const ScanOptions& options = {});
DoubleDouble H_of_dd(double x, bool odd_only = false, const ScanOptions& options = {});

// (pi c / 4) (H(x) + H(x/2) - 2 H(x/4))
double q_mt(double x, const ScanOptions& options = {});
double q_mt_prefactor();
// Half-width of the q_mt uncertainty coming from the interval on c.
double q_mt_interval_halfwidth(double x, const ScanOptions& options = {});

// G(1)/Gamma(1/4) * x / (ln x)^(3/4); x >= 3.
double h_asymptotic(double x);

struct MainTermReport {
  u64 x = 0;
  double H = 0.0;
  double H_half = 0.0;
  double H_quarter = 0.0;
  double q_direct = 0.0;
  double q_mt = 0.0;
  double q_mt_halfwidth = 0.0;
  double h_asymptotic = 0.0;
  double ratio_q = 0.0;  // q_direct / q_mt
  double ratio_h = 0.0;  // H / h_asymptotic
};

// All reports come from one sieve pass up to max(xs).
std::vector<MainTermReport> main_term_reports(const std::vector<u64>& xs, const ScanOptions& options = {});

void write_main_term_csv(std::ostream& os, const std::vector<MainTermReport>& rows);

}  // namespace tsrl
