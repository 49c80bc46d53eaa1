#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tsrl/arith.hpp"

namespace tsrl {

constexpr u64 kSieveMaxHi = 2'000'000'001ULL;
constexpr u64 kDefaultSegment = u64{1} << 22;
constexpr u64 kDefaultSieveBudget = u64{1} << 28;  // entries per table

class SieveTable {
 public:
  SieveTable() = default;
  SieveTable(u64 lo, u64 hi, std::vector<std::uint32_t> h, std::vector<std::uint32_t> tau);

  u64 lo() const { return lo_; }
  u64 hi() const { return hi_; }
  std::size_t size() const { return static_cast<std::size_t>(hi_ - lo_); }
  bool has_h() const { return !h_.empty() || size() == 0; }
  bool has_tau() const { return !tau_.empty(); }

  std::uint32_t h(u64 n) const { return h_[n - lo_]; }
  std::uint32_t tau(u64 n) const { return tau_[n - lo_]; }
  const std::vector<std::uint32_t>& h_values() const { return h_; }
  const std::vector<std::uint32_t>& tau_values() const { return tau_; }

 private:
  u64 lo_ = 0;
  u64 hi_ = 0;
  std::vector<std::uint32_t> h_;
  std::vector<std::uint32_t> tau_;
};

// h(n) for n in [lo, hi). Throws RangeTooLarge.
SieveTable sieve_h(u64 lo, u64 hi, u64 budget = kDefaultSieveBudget);
// tau(n) for n in [lo, hi); the h channel is left empty.
SieveTable sieve_tau(u64 lo, u64 hi, u64 budget = kDefaultSieveBudget);

// Odd-only bitset of primes up to a limit.
class PrimeSet {
 public:
  explicit PrimeSet(u64 limit);

  u64 limit() const { return limit_; }
  bool contains(u64 n) const;
  u64 count() const { return count_; }
  std::vector<u64> to_vector() const;

  template <class F>
  void for_each(F&& f) const {
    if (limit_ >= 2) f(u64{2});
    for (u64 w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(word));
        word &= word - 1;
        u64 n = 2 * (w * 64 + b) + 1;
        if (n > limit_) return;
        f(n);
      }
    }
  }

 private:
  u64 limit_;
  u64 count_ = 0;
  std::vector<std::uint64_t> bits_;  // bit i <-> 2i+1 is prime
};

PrimeSet primes_upto(u64 limit);

// Per-segment output of the multiplicative sieve. Channels are filled on request.
struct SegmentChannels {
  bool h = true;
  bool tau = false;
  bool e = false;  // local-density weight E(n) as double
};

struct SegmentData {
  u64 lo = 0;
  u64 hi = 0;
  std::vector<std::uint32_t> h;
  std::vector<std::uint32_t> tau;
  std::vector<double> e;
};

// Base primes needed to sieve anything below `hi`.
std::vector<std::uint32_t> base_primes_for(u64 hi);

void sieve_segment(u64 lo, u64 hi, const std::vector<std::uint32_t>& base_primes, const SegmentChannels& channels,
                   SegmentData& out);

// Binary dump: little-endian u64 lo, u64 hi, then (hi-lo) little-endian u32 h values.
void write_table(std::ostream& os, const SieveTable& table);
SieveTable read_table(std::istream& is);

}  // namespace tsrl
