#include "tsrl/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>

namespace tsrl {
namespace {

constexpr std::size_t kMaxPanels = 4000;

std::vector<double> panels(double a, double b, const std::vector<double>& breakpoints) {
  std::vector<double> pts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) pts.push_back(p);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class T>
struct Panel {
  double a, b;
  T value;
  double err;
  double l1;
  bool operator<(const Panel& o) const { return err < o.err; }
};

template <class T, class F>
Panel<T> rule(const F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0, l1 = 0.0;
  // max_depth 0: a single 15-point Kronrod estimate with its Gauss-7 error.
  // Boost reports that error on the reference interval [-1, 1], unscaled.
  T v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  return {a, b, v, err * 0.5 * (b - a), l1};
}

template <class T, class F>
QuadratureResult<T> integrate_impl(const F& f, double a, double b, double tol, const std::vector<double>& breakpoints) {
  QuadratureResult<T> out;
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  auto pts = panels(a, b, breakpoints);
  std::priority_queue<Panel<T>> heap;
  double err = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto p = rule<T>(f, pts[i], pts[i + 1]);
    err += p.err;
    l1 += p.l1;
    heap.push(p);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  while (heap.size() < kMaxPanels && err > tol && err > 50 * eps * l1) {
    auto worst = heap.top();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    auto left = rule<T>(f, worst.a, mid);
    auto right = rule<T>(f, mid, worst.b);
    err += left.err + right.err - worst.err;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the final panels in position order so the result does not depend on heap history.
  std::vector<Panel<T>> done;
  done.reserve(heap.size());
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  err = 0.0;
  for (const auto& p : done) {
    out.value += p.value;
    err += p.err;
  }
  out.abs_error_estimate = err;
  out.value *= sign;
  return out;
}

}  // namespace

RealQuad integrate(const std::function<double(double)>& f, double a, double b, double tol,
                   const std::vector<double>& breakpoints) {
  return integrate_impl<double>(f, a, b, tol, breakpoints);
}

ComplexQuad integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b, double tol,
                              const std::vector<double>& breakpoints) {
  return integrate_impl<std::complex<double>>(f, a, b, tol, breakpoints);
}

}  // namespace tsrl
