#include "tsrl/numeric.hpp"

#include <cmath>
#include <numbers>

#include "tsrl/errors.hpp"

namespace tsrl {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::BadShape: return "BadShape";
    case Errc::ModulusTooLarge: return "ModulusTooLarge";
    case Errc::NotPrimitive: return "NotPrimitive";
    case Errc::RangeTooLarge: return "RangeTooLarge";
    case Errc::DerivOrderTooHigh: return "DerivOrderTooHigh";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::SizeTooLarge: return "SizeTooLarge";
    case Errc::MissingGolden: return "MissingGolden";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

DoubleDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DoubleDouble& DoubleDouble::operator+=(const DoubleDouble& o) {
  DoubleDouble s = two_sum(hi, o.hi);
  DoubleDouble t = two_sum(lo, o.lo);
  s.lo += t.hi;
  s = two_sum(s.hi, s.lo);
  s.lo += t.lo;
  *this = two_sum(s.hi, s.lo);
  return *this;
}

DoubleDouble& DoubleDouble::operator+=(double x) { return *this += DoubleDouble{x, 0.0}; }

DoubleDouble operator+(DoubleDouble a, const DoubleDouble& b) { return a += b; }

DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

DoubleDouble CompensatedSum::as_double_double() const { return two_sum(sum_, comp_); }

std::complex<double> unit_phase(double turns) {
  double r = turns - std::floor(turns);
  double ang = 2.0 * std::numbers::pi * r;
  return {std::cos(ang), std::sin(ang)};
}

std::complex<double> unit_phase(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % den;
  if (r < 0) r += den;
  return unit_phase(static_cast<double>(r) / static_cast<double>(den));
}

}  // namespace tsrl
