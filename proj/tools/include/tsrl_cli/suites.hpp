#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tsrl::cli {

struct CaseResult {
  std::string name;
  bool passed = false;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

struct SuiteResult {
  std::string name;
  std::vector<CaseResult> cases;
  bool passed() const;
};

std::vector<std::string> suite_names();

// Throws ValidationError for unknown names; "all" runs every suite.
std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed);

nlohmann::ordered_json suites_to_json(const std::vector<SuiteResult>& suites);
std::string suites_to_junit(const std::vector<SuiteResult>& suites);

}  // namespace tsrl::cli
