#pragma once

#include <complex>

#include "tsrl/quadrature.hpp"

namespace tsrl {

constexpr unsigned kMaxRhoDerivative = 12;

// exp(1/(x^2-1)) on (-1, 1), zero elsewhere.
double rho(double x);
// j-th derivative via the exact polynomial recurrence. Throws DerivOrderTooHigh for j > 12.
double rho_deriv(double x, unsigned j);
// Integral of rho over [-1, 1], and over [-1, u].
double rho_integral();
double rho_cumulative(double u);

// Smooth cutoff equal to 1 on [a + delta/2, b - delta/2] and 0 outside (a - delta/2, b + delta/2).
class BumpSpec {
 public:
  BumpSpec(double a, double b, double delta);  // throws PreconditionViolated unless 0 < delta < b - a

  double a() const { return a_; }
  double b() const { return b_; }
  double delta() const { return delta_; }
  double normalization() const { return c_; }
  double support_lo() const { return a_ - delta_ / 2; }
  double support_hi() const { return b_ + delta_ / 2; }

 private:
  double a_, b_, delta_, c_;
};

BumpSpec psi_spec();
BumpSpec f_delta_spec(double delta);

double sigma(const BumpSpec& spec, double x);
double sigma_deriv(const BumpSpec& spec, double x);

double psi(double x);
double psi_deriv(double x);

// Fourier transform of psi at lambda, |lambda| <= 1e4.
ComplexQuad psi_hat(double lambda);
// k-th derivative of psi_hat at x.
ComplexQuad psi_hat_deriv(unsigned k, double x);

double f_delta(double delta, double u);
// Mellin transform at s = it, for 0 < delta < 1/2.
ComplexQuad F_delta(double delta, double t);

struct SideBySide {
  double lhs = 0.0;
  double rhs = 0.0;
  double diff = 0.0;  // lhs - rhs
};

// Smallest integer H meeting H >= (5q/M)(ln M)^4.
long lemma7_min_H(long q, double M);

// Sum of psi(m/M) over m = a (mod q) against its truncated Poisson expansion.
// Throws PreconditionViolated.
SideBySide poisson_check_progression(long q, long a, double M, long H);
// Sum of psi(m/M) over m coprime to q against phi(q) M psi_hat(0)/q.
SideBySide poisson_check_coprime(long q, double M);
// sum_n psi((n+x)/H) against H sum_{|m| <= m_max} psi_hat(Hm) e(mx).
SideBySide poisson_identity_check(double H, double x, long m_max);

struct MellinCheck {
  double f_exact = 0.0;
  double f_reconstructed = 0.0;
  double diff = 0.0;
};

// Truncated Mellin inversion of f_delta at u, integrating |t| <= T.
MellinCheck mellin_inversion_check(double delta, double T, double u);

}  // namespace tsrl
