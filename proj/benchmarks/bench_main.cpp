#include <benchmark/benchmark.h>

#include "tsrl/constants.hpp"
#include "tsrl/lemma_lab.hpp"
#include "tsrl/mainterm.hpp"
#include "tsrl/series.hpp"
#include "tsrl/sieve.hpp"
#include "tsrl/smooth.hpp"

using namespace tsrl;

static void BM_SieveH(benchmark::State& state) {
  const u64 len = static_cast<u64>(state.range(0));
  for (auto _ : state) {
    auto t = sieve_h(1'000'000'000, 1'000'000'000 + len);
    benchmark::DoNotOptimize(t.h_values().data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * len));
}
BENCHMARK(BM_SieveH)->RangeMultiplier(10)->Range(10'000, 1'000'000)->Unit(benchmark::kMillisecond);

static void BM_PrimesUpto(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(primes_upto(static_cast<u64>(state.range(0))).count());
}
BENCHMARK(BM_PrimesUpto)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

static void BM_QFloat(benchmark::State& state) {
  ScanOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(q_of_x(static_cast<u64>(state.range(0)), false, opt).value);
}
BENCHMARK(BM_QFloat)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

static void BM_QExact(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(q_of_x(static_cast<u64>(state.range(0)), true).exact);
}
BENCHMARK(BM_QExact)->Arg(100'000)->Unit(benchmark::kMillisecond);

// c1_closed_form memoizes per limit, so time the uncached work: sieve plus log-factor sum.
static void BM_C1Product(benchmark::State& state) {
  for (auto _ : state) {
    double sum = 0;
    primes_upto(static_cast<u64>(state.range(0))).for_each([&](u64 p) {
      if (p % 4 == 1) sum += c1_log_factor(p);
    });
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_C1Product)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

static void BM_MainTerm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(q_mt(static_cast<double>(state.range(0))));
}
BENCHMARK(BM_MainTerm)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_PsiHat(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(psi_hat(lambda).value);
}
BENCHMARK(BM_PsiHat)->Arg(1)->Arg(100)->Arg(1000);

static void BM_Kloosterman(benchmark::State& state) {
  const u64 c = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kloosterman(3, 7, c));
}
BENCHMARK(BM_Kloosterman)->Arg(1009)->Arg(100'003);
BENCHMARK_MAIN();
