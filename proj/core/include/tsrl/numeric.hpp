#pragma once

#include <complex>
#include <cstdint>

namespace tsrl {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  double value() const { return hi + lo; }
  DoubleDouble& operator+=(const DoubleDouble& o);
  DoubleDouble& operator+=(double x);
};

DoubleDouble two_sum(double a, double b);
DoubleDouble operator+(DoubleDouble a, const DoubleDouble& b);
DoubleDouble operator-(const DoubleDouble& a);

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }
  DoubleDouble as_double_double() const;
  void reset() { sum_ = comp_ = 0.0; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// e(x) = exp(2 pi i x), with the argument reduced mod 1 first.
std::complex<double> unit_phase(double turns);

// e(num/den) with exact integer reduction of the numerator.
std::complex<double> unit_phase(std::int64_t num, std::int64_t den);

}  // namespace tsrl
