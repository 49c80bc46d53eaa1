#include "tsrl_cli/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "tsrl/characters.hpp"
#include "tsrl/dispersion.hpp"
#include "tsrl/errors.hpp"
#include "tsrl/lemma_lab.hpp"
#include "tsrl/sieve.hpp"
#include "tsrl/smooth.hpp"
#include "tsrl_cli/run.hpp"

namespace tsrl::cli {
namespace {

using json = nlohmann::ordered_json;

CaseResult make_case(std::string name, bool passed, json metrics = json::object()) {
  return CaseResult{std::move(name), passed, std::move(metrics)};
}

SuiteResult suite_lemma9(std::uint64_t) {
  SuiteResult s{"lemma9", {}};
  for (auto [d, d1, d2] : {std::array<u64, 3>{6, 4, 3}, {2, 2, 1}, {1, 1, 1}}) {
    auto r = lemma9_verify(d, d1, d2);
    s.cases.push_back(make_case("shape_" + std::to_string(d) + "_" + std::to_string(d1) + "_" + std::to_string(d2),
                                r.pass, {{"pairs", r.pairs_checked}}));
  }
  auto sweep = lemma9_sweep(12, 16);
  s.cases.push_back(make_case("exhaustive_12_16", sweep.failures == 0,
                              {{"shapes", sweep.shapes}, {"pairs", sweep.pairs_checked}, {"failures", sweep.failures}}));
  return s;
}

SuiteResult suite_lemma10(std::uint64_t seed) {
  SuiteResult s{"lemma10", {}};
  s.cases.push_back(make_case("tuple_1_3_5_2_7", lemma10_verify(1, 3, 5, 2, 7)));
  s.cases.push_back(make_case("tuple_2_3_5_1_1", lemma10_verify(2, 3, 5, 1, 1)));
  bool rejected = false;
  try {
    lemma10_verify(2, 4, 3, 1, 1);
  } catch (const Error& e) {
    rejected = e.code() == Errc::PreconditionViolated;
  }
  s.cases.push_back(make_case("rejects_shared_factor", rejected));
  auto sweep = lemma10_sweep(10'000, 1000, seed);
  s.cases.push_back(make_case("random_10000", sweep.failures == 0, {{"tuples", sweep.tuples}, {"failures", sweep.failures}}));
  return s;
}

SuiteResult suite_lemma10_5(std::uint64_t) {
  SuiteResult s{"lemma10_5", {}};
  auto expg = ThriceDifferentiable{[](long double z) { return std::exp(z); }, [](long double z) { return std::exp(z); },
                                   [](long double z) { return std::exp(z); }, [](long double z) { return std::exp(z); }};
  auto sine = ThriceDifferentiable{[](long double z) { return std::sin(z); }, [](long double z) { return std::cos(z); },
                                   [](long double z) { return -std::sin(z); }, [](long double z) { return -std::cos(z); }};
  auto cube = ThriceDifferentiable{[](long double z) { return z * z * z; }, [](long double z) { return 3 * z * z; },
                                   [](long double z) { return 6 * z; }, [](long double) { return 6.0L; }};
  double e1 = lemma10_5_verify(expg, 1.0, 1.0, 2.0, 3.0);
  s.cases.push_back(make_case("exp_1_2_3", e1 <= 1e-6, {{"max_rel_error", e1}}));
  double e2 = lemma10_5_verify(sine, 2.0, 1.5, 0.7, 1.3);
  s.cases.push_back(make_case("sin_mixed", e2 <= 1e-6, {{"max_rel_error", e2}}));
  double e3 = lemma10_5_verify(cube, 0.5, 2.0, -1.5, 0.8);
  s.cases.push_back(make_case("cube_negative_x2", e3 <= 1e-6, {{"max_rel_error", e3}}));
  return s;
}

SuiteResult suite_lemma11(std::uint64_t seed) {
  SuiteResult s{"lemma11", {}};
  for (const auto& c : lemma11_standard_cases(seed)) {
    auto r = lemma11_verify(c.m, c.coeff, c.f, c.K, c.L, 1e-10);
    s.cases.push_back(make_case(c.name, r.abs_error <= 1e-8, {{"lhs", r.lhs}, {"rhs", r.rhs}, {"abs_error", r.abs_error}}));
  }
  return s;
}

SuiteResult suite_conductor(std::uint64_t) {
  SuiteResult s{"conductor", {}};
  u64 checked = 0, mismatches = 0;
  for (u64 d = 3; d <= 300; ++d) {
    for (const auto& chi : enumerate_characters(d)) {
      if (!is_primitive(chi)) continue;
      ++checked;
      if (times_chi4(chi).second != times_chi4_conductor_formula(d)) ++mismatches;
    }
  }
  s.cases.push_back(make_case("primitive_3_to_300", mismatches == 0 && checked > 0,
                              {{"primitive_characters", checked}, {"mismatches", mismatches}}));
  return s;
}

SuiteResult suite_kloosterman(std::uint64_t) {
  SuiteResult s{"kloosterman", {}};
  auto k5 = kloosterman(1, 1, 5);
  s.cases.push_back(make_case("k_1_1_5", std::abs(k5.real() - 0.3819660112501051) < 1e-12 && std::abs(k5.imag()) <= 1e-10,
                              {{"re", k5.real()}, {"im", k5.imag()}}));
  auto k7 = kloosterman(0, 0, 7);
  s.cases.push_back(make_case("k_0_0_7", std::abs(k7 - 6.0) < 1e-12));
  u64 primes = 0, violations = 0;
  double worst = 0.0;
  primes_upto(1000).for_each([&](u64 p) {
    ++primes;
    double r = std::abs(kloosterman(1, 1, p)) / (2.0 * std::sqrt(static_cast<double>(p)));
    worst = std::max(worst, r);
    if (r > 1.0 + 1e-12) ++violations;
  });
  s.cases.push_back(make_case("weil_bound_primes_1000", violations == 0,
                              {{"primes", primes}, {"max_ratio", worst}, {"violations", violations}}));
  return s;
}

SuiteResult suite_trilinear(std::uint64_t seed) {
  SuiteResult s{"trilinear", {}};
  auto sweep = trilinear_sweep(50, seed);
  s.cases.push_back(make_case("sweep_50", sweep.all_finite, {{"points", sweep.points}, {"max_bound_ratio", sweep.max_ratio}}));
  return s;
}

SuiteResult suite_smooth(std::uint64_t) {
  SuiteResult s{"smooth", {}};
  {
    u64 violations = 0;
    for (unsigned j = 0; j <= 8; ++j) {
      double f = 1.0;
      for (unsigned i = 1; i <= j; ++i) f *= i;
      double bound = std::pow(std::ldexp(f, static_cast<int>(j)), 2);
      for (int i = 0; i < 1000; ++i) {
        double x = -1.0 + (i + 0.5) / 500.0;
        if (std::abs(rho_deriv(x, j)) > bound) ++violations;
      }
    }
    s.cases.push_back(make_case("rho_derivative_bound", violations == 0, {{"violations", violations}}));
  }
  {
    double worst = 0.0;
    for (int lam = 1; lam <= 400; ++lam) worst = std::max(worst, std::abs(psi_hat(lam).value) * std::exp(std::sqrt(lam) / 2.0));
    s.cases.push_back(make_case("psi_hat_envelope", worst <= 1e3, {{"max_scaled", worst}}));
  }
  {
    auto small = poisson_check_progression(2, 1, 10, lemma7_min_H(2, 10));
    auto mid = poisson_check_progression(2, 1, 100, lemma7_min_H(2, 100));
    s.cases.push_back(make_case("poisson_progression_q2", std::abs(mid.diff) <= 1e-4 && std::abs(mid.diff) < std::abs(small.diff),
                                {{"diff_M10", small.diff}, {"diff_M100", mid.diff}}));
  }
  {
    // The error oscillates in T, so compare its envelope over [T, 2T) with that over [2T, 4T).
    auto envelope = [](double T0) {
      double worst = 0.0;
      for (int i = 0; i < 8; ++i) worst = std::max(worst, std::abs(mellin_inversion_check(0.1, T0 * std::exp2(i / 8.0), 0.5).diff));
      return worst;
    };
    double e100 = envelope(100), e200 = envelope(200);
    auto c = mellin_inversion_check(0.1, 1000, 0.5);
    auto outside = mellin_inversion_check(0.1, 1000, 3.0);
    s.cases.push_back(make_case("mellin_inversion", std::abs(c.diff) <= 1e-2 && e200 <= 0.5 * e100,
                                {{"envelope_T100", e100}, {"envelope_T200", e200}, {"diff_T1000", c.diff}}));
    s.cases.push_back(make_case("mellin_outside_support", outside.f_exact == 0.0 && std::abs(outside.f_reconstructed) <= 1.0 / (0.1 * 1000),
                                {{"reconstructed", outside.f_reconstructed}}));
  }
  return s;
}

SuiteResult suite_dispersion(std::uint64_t seed) {
  SuiteResult s{"dispersion", {}};
  u64 ok = 0, regroup_bad = 0;
  double worst_imag = 0.0;
  auto sets = dispersion_param_sweep(100, seed);
  for (const auto& p : sets) {
    auto w = build_weights(p);
    if (dispersion_inequality_check(p, w).ok) ++ok;
    auto umt = u_mt(p, w);
    if (std::abs(umt) > 0) worst_imag = std::max(worst_imag, std::abs(umt.imag()) / std::abs(umt));
    auto a = u_by_divisor_pairs(p, w), b = u_by_gcd_regrouping(p, w);
    if (std::abs(a - b) > 1e-10 * std::max(std::abs(a), 1e-300)) ++regroup_bad;
  }
  s.cases.push_back(make_case("inequality_100_sets", ok == sets.size(), {{"ok", ok}, {"sets", sets.size()}}));
  s.cases.push_back(make_case("u_mt_real", worst_imag <= 1e-10, {{"max_rel_imag", worst_imag}}));
  s.cases.push_back(make_case("u_regrouping", regroup_bad == 0, {{"mismatches", regroup_bad}}));
  return s;
}

SuiteResult suite_diagnostics(std::uint64_t) {
  SuiteResult s{"diagnostics", {}};
  for (u64 x : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
    auto sh = shiu_diagnostic(x);
    s.cases.push_back(make_case("shiu_" + std::to_string(x), std::isfinite(sh.ratio) && sh.ratio > 0,
                                {{"lhs", sh.lhs}, {"rhs_without_constant", sh.rhs_without_constant}, {"ratio", sh.ratio}}));
    auto rh = richert_halberstam_diagnostic(x);
    s.cases.push_back(make_case("richert_halberstam_" + std::to_string(x), std::isfinite(rh.ratio) && rh.ratio > 0,
                                {{"ratio", rh.ratio}, {"empirical_A", rh.empirical_A}, {"empirical_B", rh.empirical_B}}));
  }
  return s;
}

using SuiteFn = SuiteResult (*)(std::uint64_t);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"lemma9", suite_lemma9},         {"lemma10", suite_lemma10},       {"lemma10_5", suite_lemma10_5},
      {"lemma11", suite_lemma11},       {"conductor", suite_conductor},   {"kloosterman", suite_kloosterman},
      {"trilinear", suite_trilinear},   {"smooth", suite_smooth},         {"dispersion", suite_dispersion},
      {"diagnostics", suite_diagnostics}};
  return r;
}

std::string xml_escape(const std::string& in) {
  std::string out;
  for (char ch : in) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

bool SuiteResult::passed() const {
  for (const auto& c : cases)
    if (!c.passed) return false;
  return true;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [n, f] : registry()) names.push_back(n);
  return names;
}

std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& [n, f] : registry())
    if (name == "all" || name == n) out.push_back(f(seed));
  if (out.empty()) throw ValidationError("unknown suite '" + name + "'");
  return out;
}

json suites_to_json(const std::vector<SuiteResult>& suites) {
  json d;
  bool all = true;
  json arr = json::array();
  for (const auto& s : suites) {
    json cases = json::array();
    for (const auto& c : s.cases) cases.push_back({{"name", c.name}, {"passed", c.passed}, {"metrics", c.metrics}});
    arr.push_back({{"name", s.name}, {"passed", s.passed()}, {"cases", cases}});
    all = all && s.passed();
  }
  d["passed"] = all;
  d["suites"] = arr;
  return d;
}

std::string suites_to_junit(const std::vector<SuiteResult>& suites) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<testsuites>\n";
  for (const auto& s : suites) {
    std::size_t failures = 0;
    for (const auto& c : s.cases) failures += !c.passed;
    os << "  <testsuite name=\"" << xml_escape(s.name) << "\" tests=\"" << s.cases.size() << "\" failures=\"" << failures
       << "\">\n";
    for (const auto& c : s.cases) {
      os << "    <testcase classname=\"" << xml_escape(s.name) << "\" name=\"" << xml_escape(c.name) << "\"";
      if (c.passed) {
        os << "/>\n";
      } else {
        os << ">\n      <failure message=\"" << xml_escape(c.metrics.dump()) << "\"/>\n    </testcase>\n";
      }
    }
    os << "  </testsuite>\n";
  }
  os << "</testsuites>\n";
  return os.str();
}

}  // namespace tsrl::cli
