#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace tsrl {

template <class T>
struct QuadratureResult {
  T value{};
  double abs_error_estimate = 0.0;
};

using RealQuad = QuadratureResult<double>;
using ComplexQuad = QuadratureResult<std::complex<double>>;

// Globally adaptive Gauss-Kronrod (7/15) on [a, b], split at every breakpoint inside the interval.
// Bisects the worst panel until the summed error estimate is below `tol` (absolute), below
// rounding noise of the L1 norm, or the panel budget runs out.
RealQuad integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                   const std::vector<double>& breakpoints = {});

ComplexQuad integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                              double tol = 1e-13, const std::vector<double>& breakpoints = {});

}  // namespace tsrl
