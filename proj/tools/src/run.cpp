#include "tsrl_cli/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "tsrl/constants.hpp"
#include "tsrl/dispersion.hpp"
#include "tsrl/errors.hpp"
#include "tsrl/mainterm.hpp"
#include "tsrl/parallel.hpp"
#include "tsrl/series.hpp"
#include "tsrl/sieve.hpp"
#include "tsrl/smooth.hpp"
#include "tsrl_cli/suites.hpp"

namespace tsrl::cli {
namespace {

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json euler_json(const EulerProductValue& v) {
  return json{{"value", v.value},
              {"interval", {v.interval_lo, v.interval_hi}},
              {"tail_bound", v.tail_bound},
              {"prime_limit", v.prime_limit}};
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ScanOptions scan_options(const RunConfig& c) { return ScanOptions{c.threads, 0}; }

json table(std::vector<std::string> columns) {
  return json{{"columns", columns}, {"rows", json::array()}};
}

json doc_constants(const RunConfig& c) {
  if (c.prime_limit < 100'000) throw ValidationError("--prime-limit must be at least 1e5");
  json d;
  d["prime_limit"] = c.prime_limit;
  d["c1"] = euler_json(c1_closed_form(c.prime_limit));
  d["c1_via_identity"] = euler_json(c1_via_identity(c.prime_limit));
  d["K"] = euler_json(korolev_K(c.prime_limit));
  d["c"] = euler_json(c_constant(c.prime_limit));
  d["P1"] = euler_json(p1_at_one(c.prime_limit));
  d["P3"] = euler_json(p3_at_one(c.prime_limit));
  d["G1"] = euler_json(g_at_one(c.prime_limit));
  d["gamma_quarter"] = gamma_quarter();
  d["L1_chi4"] = l_one_chi4();
  return d;
}

json doc_qsum(const RunConfig& c) {
  auto q = q_of_x(c.x, c.exact, scan_options(c));
  json d;
  d["x"] = c.x;
  d["Q"] = q.value;
  d["Q_normalized"] = q_normalized(q.value, c.x);
  d["terms_used"] = q.terms_used;
  if (q.exact) d["Q_exact"] = q.exact->get_str();
  if (c.with_s) d["S"] = s_of_x(c.x, scan_options(c)).value;
  return d;
}

json doc_qtable(const RunConfig& c) {
  if (c.xs.empty()) throw ValidationError("--xs needs at least one value");
  for (auto x : c.xs)
    if (x == 0) throw ValidationError("--xs values must be positive");
  if (c.with_mt) {
    json d = table({"x", "Q", "Q_MT", "ratio", "H", "H_asym", "ratio_H"});
    for (const auto& r : main_term_reports(c.xs, scan_options(c))) {
      d["rows"].push_back(json::array({r.x, r.q_direct, r.q_mt, r.ratio_q, r.H, r.h_asymptotic, r.ratio_h}));
    }
    return d;
  }
  json d = table({"x", "Q", "Q_normalized", "terms_used"});
  auto pts = scan_prefix_sums(c.xs, ScanChannels{true, false, false}, scan_options(c));
  for (auto x : c.xs) {
    for (const auto& p : pts) {
      if (p.x != x) continue;
      double q = p.q.value();
      d["rows"].push_back(json::array({x, q, q_normalized(q, x), p.q_terms}));
      break;
    }
  }
  return d;
}

json doc_decompose(const RunConfig& c) {
  auto dec = q_decomposition(c.x, c.A);
  auto total = q_of_x(c.x, true, scan_options(c));
  Rational sum = dec.q1 + dec.q2 + dec.q3;
  json d;
  d["x"] = c.x;
  d["A"] = c.A;
  d["lower_cut"] = dec.lower_cut;
  d["upper_cut"] = dec.upper_cut;
  d["Q1"] = dec.q1.get_d();
  d["Q2"] = dec.q2.get_d();
  d["Q3"] = dec.q3.get_d();
  d["Q1_exact"] = dec.q1.get_str();
  d["Q2_exact"] = dec.q2.get_str();
  d["Q3_exact"] = dec.q3.get_str();
  d["Q_exact"] = total.exact->get_str();
  d["identity_holds"] = sum == *total.exact;
  return d;
}

json doc_qerr2(const RunConfig& c) {
  double v = qerr2_direct(c.x, c.A);
  json d;
  d["x"] = c.x;
  d["A"] = c.A;
  d["value"] = v;
  d["normalized"] = c.x > 1 ? std::abs(v) * std::pow(std::log(static_cast<double>(c.x)), 0.75) / c.x : 0.0;
  return d;
}

json doc_smooth(const RunConfig& c) {
  if (c.points < 2) throw ValidationError("--points must be at least 2");
  const double n = c.points - 1;
  if (c.table == "sigma") {
    // psi when delta is 0.5, otherwise the f_delta cutoff
    json d = table({"x", "sigma"});
    BumpSpec spec = c.delta == 0.5 ? psi_spec() : f_delta_spec(c.delta);
    double lo = spec.support_lo() - 0.1, hi = spec.support_hi() + 0.1;
    for (unsigned i = 0; i < c.points; ++i) {
      double x = lo + (hi - lo) * i / n;
      d["rows"].push_back(json::array({x, sigma(spec, x)}));
    }
    return d;
  }
  if (c.table == "psi-hat") {
    json d = table({"lambda", "abs_psi_hat", "envelope"});
    for (unsigned i = 0; i < c.points; ++i) {
      double lam = c.T * i / n;
      double a = std::abs(psi_hat(lam).value);
      d["rows"].push_back(json::array({lam, a, a * std::exp(std::sqrt(lam) / 2)}));
    }
    return d;
  }
  if (c.table == "mellin") {
    if (!(c.delta > 0 && c.delta < 0.5)) throw ValidationError("--delta must lie in (0, 1/2)");
    json d = table({"t", "abs_F"});
    for (unsigned i = 0; i < c.points; ++i) {
      double t = c.T * i / n;
      d["rows"].push_back(json::array({t, std::abs(F_delta(c.delta, t).value)}));
    }
    return d;
  }
  throw ValidationError("--table must be sigma, psi-hat or mellin");
}

json doc_verify(const RunConfig& c) {
  auto suites = run_suites(c.suite, c.seed);
  if (!c.junit_path.empty()) {
    std::ofstream f(c.junit_path);
    if (!f) throw ValidationError("cannot write " + c.junit_path);
    f << suites_to_junit(suites);
  }
  json d = suites_to_json(suites);
  d["seed"] = c.seed;
  return d;
}

json doc_dispersion(const RunConfig& c) {
  DispersionParams p;
  p.D = c.D;
  p.N = c.N;
  p.M = c.M;
  p.t = c.t;
  p.k = c.k;
  p.J1 = c.J1;
  p.J2 = c.J2;
  if (c.x_cap) p.x_cap = *c.x_cap;
  auto w = build_weights(p);
  auto wvu = w_v_u(p, w);
  auto umt = u_mt(p, w);
  auto ineq = dispersion_inequality_check(p, w);
  auto wmt = w_mt(p, w, 2.0 * static_cast<double>(p.D));
  // V - U^MT against N^2 (ln x_cap)^6 D, with x_cap read as 2M when uncapped
  double cap = c.x_cap ? static_cast<double>(*c.x_cap) : 2.0 * static_cast<double>(p.M);
  double scale = static_cast<double>(p.N) * p.N * std::pow(std::log(std::max(cap, 3.0)), 6) * p.D;

  json d;
  d["params"] = {{"D", p.D}, {"N", p.N}, {"M", p.M}, {"t", p.t}, {"k", p.k}, {"J1", p.J1}, {"J2", p.J2}};
  if (c.x_cap) d["params"]["x_cap"] = *c.x_cap;
  d["u_tilde"] = complex_json(u_tilde(p, w));
  d["W"] = complex_json(wvu.W);
  d["V"] = complex_json(wvu.V);
  d["U"] = complex_json(wvu.U);
  d["U_divisor_pairs"] = complex_json(u_by_divisor_pairs(p, w));
  d["U_gcd_regrouping"] = complex_json(u_by_gcd_regrouping(p, w));
  d["U_MT"] = complex_json(umt);
  d["W_MT"] = complex_json(wmt);
  d["W_minus_W_MT"] = complex_json(wvu.W - wmt);
  d["V_minus_U_MT_scaled"] = std::abs(wvu.V - umt) / scale;
  d["inequality"] = {{"lhs", ineq.lhs},
                     {"rhs", ineq.rhs},
                     {"variance_form", ineq.variance_form},
                     {"a_norm_sq", ineq.a_norm_sq},
                     {"ok", ineq.ok}};
  return d;
}

json doc_sieve_dump(const RunConfig& c) {
  if (c.out_path.empty()) throw ValidationError("sieve-dump needs --out");
  if (c.hi <= c.lo || c.lo == 0) throw ValidationError("need 1 <= lo < hi");
  SieveTable t;
  if (c.channel == "h") t = sieve_h(c.lo, c.hi);
  else if (c.channel == "tau") t = sieve_tau(c.lo, c.hi);
  else throw ValidationError("--channel must be h or tau");
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + c.out_path);
  write_table(f, t);
  json d;
  d["lo"] = c.lo;
  d["hi"] = c.hi;
  d["channel"] = c.channel;
  d["path"] = c.out_path;
  d["bytes"] = 16 + 4 * (c.hi - c.lo);
  return d;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, const json*>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, &v);
  }
}

bool is_timestamp(const std::string& path) { return path == "timestamp"; }

std::string last_key(const std::string& path) {
  std::string s = path;
  auto b = s.find('[');
  if (b != std::string::npos) s = s.substr(0, b);
  auto dot = s.rfind('.');
  return dot == std::string::npos ? s : s.substr(dot + 1);
}

}  // namespace

json build_document(const RunConfig& c) {
  json body;
  const auto& s = c.subcommand;
  if (s == "constants") body = doc_constants(c);
  else if (s == "qsum") body = doc_qsum(c);
  else if (s == "qtable") body = doc_qtable(c);
  else if (s == "decompose") body = doc_decompose(c);
  else if (s == "qerr2") body = doc_qerr2(c);
  else if (s == "smooth") body = doc_smooth(c);
  else if (s == "verify") body = doc_verify(c);
  else if (s == "dispersion") body = doc_dispersion(c);
  else if (s == "sieve-dump") body = doc_sieve_dump(c);
  else throw ValidationError("unknown subcommand '" + s + "'");
  json d;
  d["subcommand"] = s;
  for (auto it = body.begin(); it != body.end(); ++it) d[it.key()] = it.value();
  return d;
}

std::string render(const json& doc, Format format) {
  if (format == Format::Json) {
    json stamped = doc;
    stamped["timestamp"] = utc_timestamp();
    return stamped.dump(2) + "\n";
  }
  if (!doc.contains("columns")) throw ValidationError("this subcommand has no CSV form; use --format json");
  std::ostringstream os;
  const auto& cols = doc["columns"];
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].get<std::string>();
  os << "\n";
  for (const auto& row : doc["rows"]) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
  return os.str();
}

json make_golden(const json& doc, double default_tolerance) {
  json expected = doc;
  expected.erase("timestamp");
  return json{{"tolerances", {{"default", default_tolerance}, {"fields", json::object()}}}, {"expected", expected}};
}

GoldenReport golden_compare(const std::string& path, const json& candidate) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::MissingGolden, "golden file not found: " + path);
  json golden = json::parse(f);
  GoldenReport rep;
  const json tol = golden.value("tolerances", json::object());
  const double default_tol = tol.value("default", 0.0);
  const json fields = tol.value("fields", json::object());
  auto tolerance_for = [&](const std::string& p) {
    if (fields.contains(p)) return fields[p].get<double>();
    if (auto k = last_key(p); fields.contains(k)) return fields[k].get<double>();
    return default_tol;
  };

  std::vector<std::pair<std::string, const json*>> want, have;
  flatten(golden.at("expected"), "", want);
  flatten(candidate, "", have);
  std::map<std::string, const json*> have_map(have.begin(), have.end());
  std::set<std::string> seen;
  for (const auto& [p, w] : want) {
    if (is_timestamp(p)) continue;
    seen.insert(p);
    auto it = have_map.find(p);
    if (it == have_map.end()) {
      rep.failures.push_back(p + ": missing from output");
      continue;
    }
    const json& h = *it->second;
    if (w->is_number() && h.is_number()) {
      double a = w->get<double>(), b = h.get<double>();
      double t = tolerance_for(p);
      bool same = (std::isnan(a) && std::isnan(b)) || std::abs(a - b) <= t || a == b;
      if (!same) rep.failures.push_back(p + ": expected " + format_double(a) + ", got " + format_double(b) +
                                        " (tolerance " + format_double(t) + ")");
    } else if (*w != h) {
      rep.failures.push_back(p + ": expected " + w->dump() + ", got " + h.dump());
    }
  }
  for (const auto& [p, h] : have) {
    if (!is_timestamp(p) && !seen.count(p)) rep.warnings.push_back(p + ": not in golden file");
  }
  rep.pass = rep.failures.empty();
  return rep;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    set_default_threads(config.threads);
    json doc = build_document(config);
    bool tabular = doc.contains("columns");
    Format format = config.format.value_or(tabular ? Format::Csv : Format::Json);
    std::string text = render(doc, format);

    if (config.subcommand != "sieve-dump" && !config.out_path.empty()) {
      std::ofstream f(config.out_path);
      if (!f) throw ValidationError("cannot write " + config.out_path);
      f << text;
    } else {
      out << text;
    }
    if (!config.write_golden_path.empty()) {
      std::ofstream g(config.write_golden_path);
      if (!g) throw ValidationError("cannot write " + config.write_golden_path);
      g << make_golden(doc, config.golden_tolerance).dump(2) << "\n";
    }
    int code = 0;
    if (config.subcommand == "verify" && !doc.value("passed", false)) code = 1;
    if (!config.golden_path.empty()) {
      auto rep = golden_compare(config.golden_path, doc);
      for (const auto& w : rep.warnings) err << "golden warning: " << w << "\n";
      for (const auto& f : rep.failures) err << "golden mismatch: " << f << "\n";
      if (!rep.pass) code = 1;
    }
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::MissingGolden || e.code() == Errc::RangeTooLarge || e.code() == Errc::SizeTooLarge ||
                   e.code() == Errc::PreconditionViolated || e.code() == Errc::BadShape ||
                   e.code() == Errc::ModulusTooLarge || e.code() == Errc::DerivOrderTooHigh
               ? 2
               : 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tsrl::cli
