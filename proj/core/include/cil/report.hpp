#pragma once

// Run reports: the JSON artifact a command-line run can emit. schema is 1;
// field order is stable (schema, scenario, kind, inputs, result, citations,
// pass, seed, runtime_ms, tool_version) and parse_report(serialize_report(r))
// returns a report equal to r.
//
// result payloads carry a "type" tag:
//   index_report    winding / curvature-integral index evaluations
//   kernel_count    lattice kernel, cokernel and index certificates
//   ktheory         six-term solver possibility lists and narrowed answers
//   identity_check  sup-norm verification of a pointwise identity

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cil/fedosov_index.hpp"
#include "cil/lattice_fredholm.hpp"
#include "cil/six_term.hpp"

namespace cil {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunReport {
  std::string scenario;
  std::string kind;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json result = nlohmann::ordered_json::object();
  std::vector<std::string> citations;
  std::optional<bool> pass;  // empty = nothing was expected
  unsigned long long seed = 0;
  double runtime_ms = 0.0;
  std::string tool_version = kToolVersion;

  bool operator==(const RunReport&) const = default;
};

nlohmann::ordered_json report_to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::ordered_json& j);  // ValidationError
std::string serialize_report(const RunReport& r);
RunReport parse_report(const std::string& text);  // ParseError on bad JSON

// result payload builders
nlohmann::ordered_json index_report_json(const IndexReport& r);
nlohmann::ordered_json kernel_count_json(const KernelCount& k);
nlohmann::ordered_json solution_json(const SixTermSolution& sol,
                                     const std::map<int, std::string>& var_labels = {});
nlohmann::ordered_json ktheory_result_json(const KTheoryScenarioResult& res,
                                           const KTheoryScenario& scenario);

}  // namespace cil
