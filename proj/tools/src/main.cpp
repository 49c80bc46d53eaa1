#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tsrl_cli/run.hpp"

namespace {

using tsrl::cli::RunConfig;

// Accepts plain integers and exact scientific forms such as 1e7.
std::uint64_t parse_count(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !(v >= 0) || v != std::floor(v) || v > 1.8e19) {
    throw tsrl::cli::ValidationError(what + " must be a non-negative integer, got '" + s + "'");
  }
  if (s.find_first_of("eE.") == std::string::npos) return std::stoull(s);
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_list(const std::string& s, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_count(item, what));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial sums of r(n)/r(n+1): sieves, constants, smooth cutoffs, lemma checks and dispersion sums"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string x = "10000", xs, prime_limit = "1e7", D = "8", N = "16", M = "64", J1 = "2", J2 = "32", x_cap, lo = "1",
              hi = "1000", seed = "42", format;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Write the artifact here instead of stdout");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", cfg.threads, "Worker threads (default: TSRL_THREADS, else all cores)");
    sub->add_option("--seed", seed, "Seed for randomized sweeps (default 0x2A)");
    sub->add_option("--golden", cfg.golden_path, "Compare the output against this golden file");
    sub->add_option("--write-golden", cfg.write_golden_path, "Write the output as a new golden file");
    sub->add_option("--golden-tolerance", cfg.golden_tolerance, "Default tolerance for --write-golden");
  };

  auto* constants = app.add_subcommand("constants", "Euler-product constants with enclosures");
  constants->add_option("--prime-limit", prime_limit, "Largest prime in the explicit product");
  common(constants);

  auto* qsum = app.add_subcommand("qsum", "Partial sum Q(x)");
  qsum->add_option("--x", x, "Upper limit");
  qsum->add_flag("--exact", cfg.exact, "Also accumulate the exact rational value (x <= 1e6)");
  qsum->add_flag("--with-s", cfg.with_s, "Also report the divisor-function analogue");
  common(qsum);

  auto* qtable = app.add_subcommand("qtable", "Q(x) at several x from one sieve pass");
  qtable->add_option("--xs", xs, "Comma-separated x values")->required();
  qtable->add_flag("--with-mt", cfg.with_mt, "Add the main-term columns");
  common(qtable);

  auto* decompose = app.add_subcommand("decompose", "Exact three-way split of Q(x) by divisor size");
  decompose->add_option("--x", x, "Upper limit (<= 1e6)");
  decompose->add_option("--A", cfg.A, "Log-power of the split points");
  common(decompose);

  auto* qerr2 = app.add_subcommand("qerr2", "Middle-range progression error sum");
  qerr2->add_option("--x", x, "Upper limit");
  qerr2->add_option("--A", cfg.A, "Log-power of the split points");
  common(qerr2);

  auto* smooth = app.add_subcommand("smooth", "Plot tables for the smooth cutoffs");
  smooth->add_option("--table", cfg.table, "sigma, psi-hat or mellin")->check(CLI::IsMember({"sigma", "psi-hat", "mellin"}));
  smooth->add_option("--delta", cfg.delta, "Cutoff width (0.5 selects psi for --table sigma)");
  smooth->add_option("--T", cfg.T, "Upper end of the lambda or t grid");
  smooth->add_option("--points", cfg.points, "Grid size");
  common(smooth);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", cfg.suite, "Suite name or 'all'");
  verify->add_option("--junit", cfg.junit_path, "Also write a JUnit XML report");
  common(verify);

  auto* dispersion = app.add_subcommand("dispersion", "Direct dispersion sums for one parameter set");
  dispersion->add_option("--D", D, "Modulus range base");
  dispersion->add_option("--N", N, "Prime range base");
  dispersion->add_option("--M", M, "Long range base");
  dispersion->add_option("--t", cfg.t, "Frequency");
  dispersion->add_option("--k", cfg.k, "Prime-divisor count");
  dispersion->add_option("--j1", J1, "Lower end of the prime interval");
  dispersion->add_option("--j2", J2, "Upper end of the prime interval");
  dispersion->add_option("--x-cap", x_cap, "Cap on the support of the long weights");
  common(dispersion);

  auto* dump = app.add_subcommand("sieve-dump", "Binary dump of a sieve table");
  dump->add_option("--lo", lo, "First n");
  dump->add_option("--hi", hi, "One past the last n");
  dump->add_option("--channel", cfg.channel, "h or tau")->check(CLI::IsMember({"h", "tau"}));
  common(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.x = parse_count(x, "--x");
    if (!xs.empty()) cfg.xs = parse_list(xs, "--xs");
    cfg.prime_limit = parse_count(prime_limit, "--prime-limit");
    cfg.D = parse_count(D, "--D");
    cfg.N = parse_count(N, "--N");
    cfg.M = parse_count(M, "--M");
    cfg.J1 = parse_count(J1, "--j1");
    cfg.J2 = parse_count(J2, "--j2");
    if (!x_cap.empty()) cfg.x_cap = parse_count(x_cap, "--x-cap");
    cfg.lo = parse_count(lo, "--lo");
    cfg.hi = parse_count(hi, "--hi");
    cfg.seed = std::stoull(seed, nullptr, 0);
    if (format == "csv") cfg.format = tsrl::cli::Format::Csv;
    if (format == "json") cfg.format = tsrl::cli::Format::Json;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return tsrl::cli::run(cfg, std::cout, std::cerr);
}
