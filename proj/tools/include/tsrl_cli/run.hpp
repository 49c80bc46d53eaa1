#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tsrl::cli {

using json = nlohmann::ordered_json;

enum class Format { Json, Csv };

struct RunConfig {
  std::string subcommand;

  std::uint64_t x = 10'000;
  std::vector<std::uint64_t> xs;
  double A = 2.0;
  bool exact = false;
  bool with_s = false;
  bool with_mt = false;

  std::uint64_t prime_limit = 10'000'000;

  // dispersion
  std::uint64_t D = 8, N = 16, M = 64;
  double t = 0.0;
  unsigned k = 1;
  std::uint64_t J1 = 2, J2 = 32;
  std::optional<std::uint64_t> x_cap;

  // smooth
  std::string table = "sigma";  // sigma | psi-hat | mellin
  double delta = 0.1;
  double T = 100.0;
  unsigned points = 200;

  // verify
  std::string suite = "all";
  std::string junit_path;

  // sieve-dump
  std::uint64_t lo = 1, hi = 1'000;
  std::string channel = "h";

  std::optional<Format> format;
  std::string out_path;
  unsigned threads = 0;
  std::uint64_t seed = 0x2A;
  std::string golden_path;
  std::string write_golden_path;
  double golden_tolerance = 0.0;  // default tolerance written into new golden headers
};

// Bad user input; maps to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds the output document for a subcommand. Table-shaped documents carry
// "columns" and "rows" so they can also be rendered as CSV.
json build_document(const RunConfig& config);

std::string render(const json& doc, Format format);

// Exit code: 0 success, 1 internal error or golden mismatch, 2 validation failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct GoldenReport {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

// Throws Error(MissingGolden) when the file is absent. Golden layout:
//   {"tolerances": {"default": tol, "fields": {"dotted.path" or "key": tol}}, "expected": {...}}
// The "timestamp" field is never compared; extra fields in `candidate` only warn.
GoldenReport golden_compare(const std::string& path, const json& candidate);
json make_golden(const json& doc, double default_tolerance);

}  // namespace tsrl::cli
