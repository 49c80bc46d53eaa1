#include "tsrl/smooth.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <string>
#include <vector>

#include "tsrl/arith.hpp"
#include "tsrl/errors.hpp"
#include "tsrl/numeric.hpp"

namespace tsrl {
namespace {

constexpr double kTol = 1e-13;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Coefficients (ascending powers) of P_j with rho^(j)(x) = P_j(x) rho(x) / (x^2-1)^{2j}.
const std::vector<std::vector<long double>>& rho_polynomials() {
  static const std::vector<std::vector<long double>> table = [] {
    using Poly = std::vector<mpz_class>;
    auto mul = [](const Poly& p, const Poly& q) {
      Poly r(p.size() + q.size() - 1, 0);
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
      return r;
    };
    auto add = [](Poly p, const Poly& q) {
      if (p.size() < q.size()) p.resize(q.size(), 0);
      for (std::size_t i = 0; i < q.size(); ++i) p[i] += q[i];
      return p;
    };
    auto derive = [](const Poly& p) {
      Poly r(p.size() > 1 ? p.size() - 1 : 1, 0);
      for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<unsigned long>(i);
      return r;
    };
    const Poly w{-1, 0, 1};  // x^2 - 1
    const Poly w2 = mul(w, w);
    std::vector<Poly> P{Poly{1}};
    for (unsigned j = 0; j < kMaxRhoDerivative; ++j) {
      const Poly& pj = P.back();
      // P_{j+1} = P_j' w^2 - 4 j x w P_j - 2 x P_j
      Poly t1 = mul(derive(pj), w2);
      Poly xw = mul(Poly{0, mpz_class(-4 * static_cast<long>(j))}, w);
      Poly t2 = mul(xw, pj);
      Poly t3 = mul(Poly{0, -2}, pj);
      P.push_back(add(add(t1, t2), t3));
    }
    std::vector<std::vector<long double>> out;
    for (const auto& p : P) {
      std::vector<long double> c;
      for (const auto& z : p) c.push_back(static_cast<long double>(z.get_d()));
      out.push_back(std::move(c));
    }
    return out;
  }();
  return table;
}

double rho_scaled_cumulative(double lo, double hi) {
  if (hi <= lo) return 0.0;
  return integrate(rho, lo, hi, kTol).value;
}

}  // namespace

double rho(double x) {
  if (!(std::fabs(x) < 1.0)) return 0.0;
  return std::exp(1.0 / (x * x - 1.0));
}

double rho_deriv(double x, unsigned j) {
  if (j > kMaxRhoDerivative) {
    throw Error(Errc::DerivOrderTooHigh, "rho derivatives available up to order 12, asked " + std::to_string(j));
  }
  if (!(std::fabs(x) < 1.0)) return 0.0;
  if (j == 0) return rho(x);
  const auto& c = rho_polynomials()[j];
  long double xl = x, p = 0.0L;
  for (std::size_t i = c.size(); i-- > 0;) p = p * xl + c[i];
  if (p == 0.0L) return 0.0;
  long double w = xl * xl - 1.0L;
  long double log_mag = std::log(std::fabs(p)) + 1.0L / w - 2.0L * j * std::log(std::fabs(w));
  double mag = static_cast<double>(std::exp(log_mag));
  return p < 0 ? -mag : mag;
}

double rho_integral() {
  static const double value = rho_scaled_cumulative(-1.0, 1.0);
  return value;
}

double rho_cumulative(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return rho_integral();
  if (u <= 0.0) return rho_scaled_cumulative(-1.0, u);
  return rho_integral() - rho_scaled_cumulative(u, 1.0);
}

BumpSpec::BumpSpec(double a, double b, double delta) : a_(a), b_(b), delta_(delta) {
  if (!(delta > 0.0 && delta < b - a)) {
    throw Error(Errc::PreconditionViolated, "bump needs 0 < delta < b - a");
  }
  c_ = integrate([delta](double t) { return rho(2.0 * t / delta); }, -delta / 2, delta / 2, kTol).value;
}

BumpSpec psi_spec() { return BumpSpec(0.75, 2.25, 0.5); }

BumpSpec f_delta_spec(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw Error(Errc::PreconditionViolated, "f_delta needs 0 < delta < 1/2");
  return BumpSpec(1.5 * delta, 1.0 + delta / 2, delta);
}

double sigma(const BumpSpec& spec, double x) {
  const double d = spec.delta();
  const double ua = 2.0 * (x - spec.a()) / d;
  const double ub = 2.0 * (x - spec.b()) / d;
  if (ua <= -1.0 || ub >= 1.0) return 0.0;
  if (ua >= 1.0 && ub <= -1.0) return 1.0;
  double mass = rho_cumulative(ua) - rho_cumulative(ub);
  double v = d / (2.0 * spec.normalization()) * mass;
  return std::clamp(v, 0.0, 1.0);
}

double sigma_deriv(const BumpSpec& spec, double x) {
  const double d = spec.delta();
  return (rho(2.0 * (x - spec.a()) / d) - rho(2.0 * (x - spec.b()) / d)) / spec.normalization();
}

namespace {
const BumpSpec& psi_bump() {
  static const BumpSpec spec = psi_spec();
  return spec;
}
}  // namespace

double psi(double x) { return sigma(psi_bump(), x); }
double psi_deriv(double x) { return sigma_deriv(psi_bump(), x); }

ComplexQuad psi_hat(double lambda) {
  if (std::fabs(lambda) > 1e4) throw Error(Errc::PreconditionViolated, "psi_hat needs |lambda| <= 1e4");
  if (lambda == 0.0) {
    auto r = integrate(psi, 0.5, 2.5, kTol, {1.0, 2.0});
    return {std::complex<double>(r.value, 0.0), r.abs_error_estimate};
  }
  // Integration by parts: psi_hat = (1 / (2 pi i lambda)) * int psi'(x) e(-lambda x) dx,
  // and psi' lives on [1/2, 1] and [2, 5/2].
  auto g = [lambda](double x) { return psi_deriv(x) * unit_phase(-lambda * x); };
  auto left = integrate_complex(g, 0.5, 1.0, kTol);
  auto right = integrate_complex(g, 2.0, 2.5, kTol);
  std::complex<double> scale = 1.0 / std::complex<double>(0.0, kTwoPi * lambda);
  return {(left.value + right.value) * scale,
          (left.abs_error_estimate + right.abs_error_estimate) * std::abs(scale)};
}

ComplexQuad psi_hat_deriv(unsigned k, double x) {
  std::complex<double> factor = std::pow(std::complex<double>(0.0, -kTwoPi), static_cast<int>(k));
  auto g = [k, x](double t) { return std::pow(t, static_cast<int>(k)) * psi(t) * unit_phase(-t * x); };
  auto r = integrate_complex(g, 0.5, 2.5, kTol, {1.0, 2.0});
  return {factor * r.value, std::abs(factor) * r.abs_error_estimate};
}

double f_delta(double delta, double u) { return sigma(f_delta_spec(delta), u); }

ComplexQuad F_delta(double delta, double t) {
  const BumpSpec spec = f_delta_spec(delta);
  // Integration by parts with u = e^v; f' is supported on [delta, 2 delta] and [1, 1 + delta].
  const double v1 = std::log(delta), v2 = std::log(2.0 * delta), v3 = 0.0, v4 = std::log1p(delta);
  if (t == 0.0) {
    auto g = [&](double v) { return -sigma_deriv(spec, std::exp(v)) * std::exp(v) * v; };
    auto a = integrate(g, v1, v2, kTol);
    auto b = integrate(g, v3, v4, kTol);
    return {std::complex<double>(a.value + b.value, 0.0), a.abs_error_estimate + b.abs_error_estimate};
  }
  auto g = [&](double v) {
    double u = std::exp(v);
    return sigma_deriv(spec, u) * u * std::polar(1.0, t * v);
  };
  auto a = integrate_complex(g, v1, v2, kTol);
  auto b = integrate_complex(g, v3, v4, kTol);
  std::complex<double> scale = -1.0 / std::complex<double>(0.0, t);
  return {(a.value + b.value) * scale, (a.abs_error_estimate + b.abs_error_estimate) * std::abs(scale)};
}

long lemma7_min_H(long q, double M) {
  double L = std::log(M);
  return static_cast<long>(std::ceil(5.0 * static_cast<double>(q) / M * L * L * L * L - 1e-12));
}

SideBySide poisson_check_progression(long q, long a, double M, long H) {
  if (q < 2 || a < 0 || a >= q) throw Error(Errc::PreconditionViolated, "need q >= 2 and 0 <= a < q");
  if (!(M > std::exp(std::sqrt(2.0 * std::log(static_cast<double>(q)))))) {
    throw Error(Errc::PreconditionViolated, "M too small for q");
  }
  double L = std::log(M);
  if (static_cast<double>(H) < 5.0 * static_cast<double>(q) / M * L * L * L * L * (1.0 - 1e-12)) {
    throw Error(Errc::PreconditionViolated, "H below (5q/M)(ln M)^4");
  }
  CompensatedSum lhs;
  long m_lo = static_cast<long>(std::floor(M / 2));
  long m_hi = static_cast<long>(std::ceil(5 * M / 2));
  long start = m_lo + ((a - m_lo) % q + q) % q;
  for (long m = start; m <= m_hi; m += q) lhs.add(psi(static_cast<double>(m) / M));

  const double scale = M / static_cast<double>(q);
  CompensatedSum rhs;
  rhs.add(scale * psi_hat(0.0).value.real());
  for (long m = 1; m <= H; ++m) {
    double lam = static_cast<double>(m) * scale;
    if (lam > 1e4) break;  // |psi_hat| is far below double resolution here
    auto v = psi_hat(lam).value * unit_phase(m * a % q, q);
    rhs.add(2.0 * scale * v.real());  // m and -m are conjugate
  }
  SideBySide out{lhs.value(), rhs.value(), 0.0};
  out.diff = out.lhs - out.rhs;
  return out;
}

SideBySide poisson_check_coprime(long q, double M) {
  if (q < 1) throw Error(Errc::PreconditionViolated, "q must be positive");
  CompensatedSum lhs;
  long m_lo = static_cast<long>(std::floor(M / 2));
  long m_hi = static_cast<long>(std::ceil(5 * M / 2));
  for (long m = std::max(1L, m_lo); m <= m_hi; ++m) {
    if (std::gcd(m, q) == 1) lhs.add(psi(static_cast<double>(m) / M));
  }
  double phi = static_cast<double>(euler_phi(static_cast<u64>(q)));
  SideBySide out{lhs.value(), phi * M * psi_hat(0.0).value.real() / static_cast<double>(q), 0.0};
  out.diff = out.lhs - out.rhs;
  return out;
}

SideBySide poisson_identity_check(double H, double x, long m_max) {
  CompensatedSum lhs;
  long n_lo = static_cast<long>(std::floor(H / 2 - x)) - 1;
  long n_hi = static_cast<long>(std::ceil(5 * H / 2 - x)) + 1;
  for (long n = n_lo; n <= n_hi; ++n) lhs.add(psi((static_cast<double>(n) + x) / H));
  CompensatedSum rhs;
  rhs.add(H * psi_hat(0.0).value.real());
  for (long m = 1; m <= m_max; ++m) {
    double lam = H * static_cast<double>(m);
    if (lam > 1e4) break;
    auto v = psi_hat(lam).value * unit_phase(static_cast<double>(m) * x);
    rhs.add(2.0 * H * v.real());
  }
  SideBySide out{lhs.value(), rhs.value(), 0.0};
  out.diff = out.lhs - out.rhs;
  return out;
}

MellinCheck mellin_inversion_check(double delta, double T, double u) {
  if (!(delta > 0.0 && delta < 0.5)) throw Error(Errc::PreconditionViolated, "need 0 < delta < 1/2");
  if (!(T >= 10.0)) throw Error(Errc::PreconditionViolated, "need T >= 10");
  if (!(u > 0.0)) throw Error(Errc::PreconditionViolated, "need u > 0");
  const double lu = std::log(u);
  // F(-it) = conj F(it), so the symmetric integral is twice the real part over [0, T].
  auto g = [&](double t) { return (F_delta(delta, t).value * std::polar(1.0, -t * lu)).real(); };
  auto r = integrate(g, 0.0, T, 1e-12);
  MellinCheck out;
  out.f_exact = f_delta(delta, u);
  out.f_reconstructed = r.value / std::numbers::pi;
  out.diff = out.f_reconstructed - out.f_exact;
  return out;
}

}  // namespace tsrl
