#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "tsrl/arith.hpp"
#include "tsrl/numeric.hpp"

namespace tsrl {

using Rational = mpq_class;

constexpr u64 kFloatSeriesMax = 2'000'000'000ULL;
constexpr u64 kExactSeriesMax = 1'000'000ULL;
constexpr u64 kDivisorSeriesMax = 10'000'000ULL;

struct PartialSum {
  u64 x = 0;
  double value = 0.0;
  DoubleDouble value_dd;
  std::optional<Rational> exact;
  u64 terms_used = 0;  // n <= x with h(n+1) != 0
};

// Prefix sums at a set of checkpoints, produced by one pass over n <= max(xs).
struct ScanChannels {
  bool q = true;      // h(n)/h(n+1) over h(n+1) != 0
  bool s = false;     // tau(n)/tau(n+1)
  bool h = false;     // E(n)/h(n) over h(n) != 0, all n and odd n
};

struct ScanPoint {
  u64 x = 0;
  DoubleDouble q;
  u64 q_terms = 0;
  DoubleDouble s;
  DoubleDouble h_all;
  DoubleDouble h_odd;
};

struct ScanOptions {
  unsigned threads = 0;  // 0: TSRL_THREADS or hardware
  u64 segment = 0;       // 0: default segment size
};

std::vector<ScanPoint> scan_prefix_sums(const std::vector<u64>& xs, const ScanChannels& channels,
                                        const ScanOptions& options = {});

// Throws RangeTooLarge past the float or exact limits.
PartialSum q_of_x(u64 x, bool exact = false, const ScanOptions& options = {});
PartialSum s_of_x(u64 x, const ScanOptions& options = {});

double q_normalized(double q, u64 x);

struct QDecomposition {
  u64 x = 0;
  double A = 0.0;
  double lower_cut = 0.0;  // sqrt(x) L^-A
  double upper_cut = 0.0;  // sqrt(x) L^A
  Rational q1, q2, q3;
};

// Splits each h(n) = sum_{d|n} chi4(d) by the size of d. Throws RangeTooLarge.
QDecomposition q_decomposition(u64 x, double A);

// Progression-minus-expected sum over the middle divisor range. Throws RangeTooLarge.
double qerr2_direct(u64 x, double A);

}  // namespace tsrl
