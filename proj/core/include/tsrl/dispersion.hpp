#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "tsrl/arith.hpp"

namespace tsrl {

// Ranges: d in (D, 2D], n in (N, 2N], m in (M, 2M]; the psi-weighted sums run over m in (M/2, 5M/2).
struct DispersionParams {
  u64 D = 8;
  u64 N = 16;
  u64 M = 64;
  double t = 0.0;
  unsigned k = 1;
  u64 J1 = 2;
  u64 J2 = 32;
  u64 x_cap = UINT64_MAX;
};

// Throws PreconditionViolated for N > M, J1 > J2, k = 0, or D, N > 1e3, M > 1e5.
void validate(const DispersionParams& p);

struct WeightPair {
  u64 m_lo = 0;  // a[i] is the weight at m = m_lo + i
  u64 n_lo = 0;
  std::vector<std::complex<double>> a;
  std::vector<std::complex<double>> b;

  std::complex<double> a_at(u64 m) const { return m >= m_lo && m - m_lo < a.size() ? a[m - m_lo] : 0.0; }
  std::complex<double> b_at(u64 n) const { return n >= n_lo && n - n_lo < b.size() ? b[n - n_lo] : 0.0; }
};

WeightPair build_weights(const DispersionParams& p);

// Throws SizeTooLarge when the direct loops would exceed the work cap.
std::complex<double> u_tilde(const DispersionParams& p);
// Overloads taking explicit weights use p only for D, M and the psi range.
std::complex<double> u_tilde(const DispersionParams& p, const WeightPair& w);

struct WVU {
  std::complex<double> W, V, U;
};

WVU w_v_u(const DispersionParams& p);
WVU w_v_u(const DispersionParams& p, const WeightPair& w);

// U summed over (d1, d2) pairs first, and regrouped by Delta = gcd(d1, d2).
std::complex<double> u_by_divisor_pairs(const DispersionParams& p);
std::complex<double> u_by_gcd_regrouping(const DispersionParams& p);
std::complex<double> u_by_divisor_pairs(const DispersionParams& p, const WeightPair& w);
std::complex<double> u_by_gcd_regrouping(const DispersionParams& p, const WeightPair& w);

std::complex<double> u_mt(const DispersionParams& p);
std::complex<double> u_mt(const DispersionParams& p, const WeightPair& w);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double variance_form = 0.0;  // Re(W - 2 Re V + U)
  double a_norm_sq = 0.0;
  bool ok = false;
};

InequalityCheck dispersion_inequality_check(const DispersionParams& p);
InequalityCheck dispersion_inequality_check(const DispersionParams& p, const WeightPair& w);

// Main term of W with the Delta-sum cut at X (X <= 2D).
std::complex<double> w_mt(const DispersionParams& p, double X);
std::complex<double> w_mt(const DispersionParams& p, const WeightPair& w, double X);

// Fixed-seed random parameter sets small enough for the direct loops.
std::vector<DispersionParams> dispersion_param_sweep(std::size_t count, u64 seed = 0x2A);

}  // namespace tsrl
