#include "tsrl/sieve.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "tsrl/errors.hpp"
#include "tsrl/parallel.hpp"

namespace tsrl {
namespace {

double e_factor(u64 p) {
  double pd = static_cast<double>(p);
  if (p % 4 == 1) return 1.0 - pd / (pd * pd - pd + 1.0);
  if (p % 4 == 3) return 1.0 + pd / (pd * pd - pd - 1.0);
  return 1.0;
}

void check_range(u64 lo, u64 hi, u64 budget) {
  if (lo < 1 || lo >= hi) throw Error(Errc::RangeTooLarge, "sieve range must satisfy 1 <= lo < hi");
  if (hi > kSieveMaxHi) throw Error(Errc::RangeTooLarge, "sieve upper bound above 2e9");
  if (hi - lo > budget) throw Error(Errc::RangeTooLarge, "sieve range exceeds the memory budget");
}

SieveTable sieve_table(u64 lo, u64 hi, u64 budget, bool want_h, bool want_tau) {
  check_range(lo, hi, budget);
  auto base = base_primes_for(hi);
  std::vector<std::uint32_t> h(want_h ? hi - lo : 0), tau(want_tau ? hi - lo : 0);
  u64 segments = (hi - lo + kDefaultSegment - 1) / kDefaultSegment;
  SegmentChannels ch{want_h, want_tau, false};
  run_indexed(segments, 0, [&](std::size_t s) {
    u64 slo = lo + s * kDefaultSegment;
    u64 shi = std::min(hi, slo + kDefaultSegment);
    SegmentData seg;
    sieve_segment(slo, shi, base, ch, seg);
    if (want_h) std::copy(seg.h.begin(), seg.h.end(), h.begin() + static_cast<std::ptrdiff_t>(slo - lo));
    if (want_tau) std::copy(seg.tau.begin(), seg.tau.end(), tau.begin() + static_cast<std::ptrdiff_t>(slo - lo));
  });
  return SieveTable(lo, hi, std::move(h), std::move(tau));
}

void put_u64(std::ostream& os, u64 v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, 8);
}

u64 get_u64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

SieveTable::SieveTable(u64 lo, u64 hi, std::vector<std::uint32_t> h, std::vector<std::uint32_t> tau)
    : lo_(lo), hi_(hi), h_(std::move(h)), tau_(std::move(tau)) {}

SieveTable sieve_h(u64 lo, u64 hi, u64 budget) { return sieve_table(lo, hi, budget, true, false); }

SieveTable sieve_tau(u64 lo, u64 hi, u64 budget) { return sieve_table(lo, hi, budget, false, true); }

PrimeSet::PrimeSet(u64 limit) : limit_(limit) {
  if (limit > kSieveMaxHi) throw Error(Errc::RangeTooLarge, "prime limit above 2e9");
  u64 odd_count = limit >= 1 ? (limit + 1) / 2 : 0;  // odd numbers 1, 3, ..., <= limit
  bits_.assign((odd_count + 63) / 64, ~std::uint64_t{0});
  if (odd_count == 0) {
    count_ = limit >= 2 ? 1 : 0;
    return;
  }
  bits_[0] &= ~std::uint64_t{1};  // 1 is not prime
  if (odd_count % 64) bits_.back() &= (std::uint64_t{1} << (odd_count % 64)) - 1;
  for (u64 i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (!((bits_[i / 64] >> (i % 64)) & 1)) continue;
    u64 p = 2 * i + 1;
    for (u64 j = (p * p) / 2; j < odd_count; j += p) bits_[j / 64] &= ~(std::uint64_t{1} << (j % 64));
  }
  for (auto w : bits_) count_ += static_cast<u64>(__builtin_popcountll(w));
  if (limit >= 2) ++count_;
}

bool PrimeSet::contains(u64 n) const {
  if (n > limit_ || n < 2) return false;
  if (n == 2) return true;
  if (n % 2 == 0) return false;
  u64 i = n / 2;
  return (bits_[i / 64] >> (i % 64)) & 1;
}

std::vector<u64> PrimeSet::to_vector() const {
  std::vector<u64> out;
  out.reserve(count_);
  for_each([&](u64 p) { out.push_back(p); });
  return out;
}

PrimeSet primes_upto(u64 limit) { return PrimeSet(limit); }

std::vector<std::uint32_t> base_primes_for(u64 hi) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(hi)));
  while (r * r > hi) --r;
  while ((r + 1) * (r + 1) <= hi) ++r;
  std::vector<std::uint32_t> out;
  PrimeSet(r).for_each([&](u64 p) { out.push_back(static_cast<std::uint32_t>(p)); });
  return out;
}

void sieve_segment(u64 lo, u64 hi, const std::vector<std::uint32_t>& base_primes, const SegmentChannels& channels,
                   SegmentData& out) {
  const std::size_t len = static_cast<std::size_t>(hi - lo);
  out.lo = lo;
  out.hi = hi;
  // prod[i] accumulates the extracted part of lo+i; odd3[i] counts primes = 3 (mod 4)
  // currently seen with odd exponent.
  std::vector<std::uint32_t> prod(len, 1);
  std::vector<std::uint8_t> odd3;
  if (channels.h) {
    out.h.assign(len, 1);
    odd3.assign(len, 0);
  } else {
    out.h.clear();
  }
  if (channels.tau) out.tau.assign(len, 1); else out.tau.clear();
  if (channels.e) out.e.assign(len, 1.0); else out.e.clear();

  for (std::uint32_t p32 : base_primes) {
    const u64 p = p32;
    if (p * p >= hi) break;
    const unsigned cls = static_cast<unsigned>(p % 4);
    const double ef = e_factor(p);
    u64 pk = p;
    for (std::uint32_t k = 1;; ++k) {
      u64 start = (lo + pk - 1) / pk * pk;
      for (u64 j = start; j < hi; j += pk) {
        std::size_t i = static_cast<std::size_t>(j - lo);
        prod[i] *= static_cast<std::uint32_t>(p);
        if (channels.h) {
          if (cls == 1) {
            out.h[i] = out.h[i] / k * (k + 1);
          } else if (cls == 3) {
            odd3[i] = static_cast<std::uint8_t>(odd3[i] + ((k & 1) ? 1 : -1));
          }
        }
        if (channels.tau) out.tau[i] = out.tau[i] / k * (k + 1);
        if (k == 1 && channels.e) out.e[i] *= ef;
      }
      if (pk > (hi - 1) / p) break;
      pk *= p;
    }
  }

  for (std::size_t i = 0; i < len; ++i) {
    u64 n = lo + i;
    if (prod[i] != n) {
      u64 cof = n / prod[i];
      unsigned cls = static_cast<unsigned>(cof % 4);
      if (channels.h) {
        if (cls == 1) out.h[i] *= 2;
        else if (cls == 3) odd3[i] = static_cast<std::uint8_t>(odd3[i] + 1);
      }
      if (channels.tau) out.tau[i] *= 2;
      if (channels.e) out.e[i] *= e_factor(cof);
    }
    if (channels.h && odd3[i] != 0) out.h[i] = 0;
  }
}

void write_table(std::ostream& os, const SieveTable& table) {
  put_u64(os, table.lo());
  put_u64(os, table.hi());
  const auto& vals = table.has_tau() && table.h_values().empty() ? table.tau_values() : table.h_values();
  for (std::uint32_t v : vals) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(buf, 4);
  }
}

SieveTable read_table(std::istream& is) {
  u64 lo = get_u64(is);
  u64 hi = get_u64(is);
  if (!is || hi < lo || hi - lo > kDefaultSieveBudget) throw Error(Errc::BadShape, "malformed sieve dump header");
  std::vector<std::uint32_t> h(hi - lo);
  for (auto& v : h) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    v = static_cast<std::uint32_t>(buf[0]) | static_cast<std::uint32_t>(buf[1]) << 8 |
        static_cast<std::uint32_t>(buf[2]) << 16 | static_cast<std::uint32_t>(buf[3]) << 24;
  }
  if (!is) throw Error(Errc::BadShape, "truncated sieve dump");
  return SieveTable(lo, hi, std::move(h), {});
}

}  // namespace tsrl
