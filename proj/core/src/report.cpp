#include "cil/report.hpp"

#include <algorithm>

#include "cil/abelian_group.hpp"

namespace cil {

namespace {

using ojson = nlohmann::ordered_json;

ojson cplx_json(const cplx& z) {
  ojson j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

std::string var_name(int v, const std::map<int, std::string>& labels) {
  auto it = labels.find(v);
  return it != labels.end() ? it->second : "var" + std::to_string(v);
}

template <typename T>
T field(const ojson& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(key, "missing from report");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(key, "wrong type in report");
  }
}

}  // namespace

ojson report_to_json(const RunReport& r) {
  ojson j;
  j["schema"] = 1;
  j["scenario"] = r.scenario;
  j["kind"] = r.kind;
  j["inputs"] = r.inputs;
  j["result"] = r.result;
  j["citations"] = r.citations;
  if (r.pass)
    j["pass"] = *r.pass;
  else
    j["pass"] = nullptr;
  j["seed"] = r.seed;
  j["runtime_ms"] = r.runtime_ms;
  j["tool_version"] = r.tool_version;
  return j;
}

RunReport report_from_json(const ojson& j) {
  if (!j.is_object()) throw ValidationError("report", "not a JSON object");
  if (field<long long>(j, "schema") != 1)
    throw ValidationError("schema", "unsupported schema version");
  RunReport r;
  r.scenario = field<std::string>(j, "scenario");
  r.kind = field<std::string>(j, "kind");
  if (!j.contains("inputs")) throw ValidationError("inputs", "missing from report");
  r.inputs = j.at("inputs");
  if (!j.contains("result")) throw ValidationError("result", "missing from report");
  r.result = j.at("result");
  r.citations = field<std::vector<std::string>>(j, "citations");
  if (!j.contains("pass")) throw ValidationError("pass", "missing from report");
  if (!j.at("pass").is_null()) r.pass = field<bool>(j, "pass");
  r.seed = field<unsigned long long>(j, "seed");
  r.runtime_ms = field<double>(j, "runtime_ms");
  r.tool_version = field<std::string>(j, "tool_version");
  return r;
}

std::string serialize_report(const RunReport& r) {
  return report_to_json(r).dump(2) + "\n";
}

RunReport parse_report(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(line, e.what());
  }
  return report_from_json(j);
}

ojson index_report_json(const IndexReport& r) {
  ojson j;
  j["type"] = "index_report";
  j["operation"] = r.operation;
  j["grid"] = r.grid_sizes;
  j["scheme"] = r.scheme;
  j["raw"] = cplx_json(r.raw);
  j["rounded"] = r.rounded;
  j["residual"] = r.residual;
  j["integral"] = cplx_json(r.integral);
  ojson contribs = ojson::array();
  for (const cplx& c : r.contributions) contribs.push_back(cplx_json(c));
  j["contributions"] = contribs;
  j["min_singular_value"] = r.min_singular_value;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["integrality_tol"] = r.integrality_tol;
  j["singular_tol"] = r.singular_tol;
  return j;
}

ojson kernel_count_json(const KernelCount& k) {
  ojson j;
  j["type"] = "kernel_count";
  j["ker_dim"] = k.ker_dim;
  j["coker_dim"] = k.coker_dim;
  j["index"] = k.index;
  j["window"] = k.window;
  j["certificate"] = k.certificate;
  j["methods_agreeing"] = k.methods_agreeing;
  j["elapsed_seconds"] = k.elapsed_seconds;
  return j;
}

ojson solution_json(const SixTermSolution& sol,
                    const std::map<int, std::string>& var_labels) {
  ojson j;
  j["type"] = "ktheory";
  ojson assignments = ojson::array();
  for (const SixTermAssignment& a : sol.assignments) {
    ojson one;
    ojson values = ojson::object();
    for (const auto& [v, g] : a.values) values[var_name(v, var_labels)] = group_to_string(g);
    one["values"] = values;
    ojson nodes = ojson::array(), images = ojson::array();
    for (int i = 0; i < 6; ++i) {
      nodes.push_back(group_to_string(a.nodes[static_cast<std::size_t>(i)]));
      images.push_back(group_to_string(a.images[static_cast<std::size_t>(i)]));
    }
    one["nodes"] = nodes;
    one["images"] = images;
    one["trace"] = a.trace;
    assignments.push_back(std::move(one));
  }
  j["assignments"] = assignments;
  j["derived_facts"] = sol.derived_facts;
  return j;
}

ojson ktheory_result_json(const KTheoryScenarioResult& res,
                          const KTheoryScenario& scenario) {
  ojson j;
  j["type"] = "ktheory";
  j["scenario"] = res.name;
  ojson stages = ojson::array();
  for (const KTheoryStageResult& st : res.stages) {
    ojson s;
    s["name"] = st.name;
    s["solution"] = solution_json(st.solution, scenario.var_labels);
    stages.push_back(std::move(s));
  }
  j["stages"] = stages;

  // Narrowed answer: the final stage's assignments projected onto the
  // variables the scenario is about, deduplicated in order.
  ojson answer;
  ojson possibilities = ojson::array();
  if (!res.stages.empty()) {
    std::vector<std::string> seen;
    for (const SixTermAssignment& a : res.stages.back().solution.assignments) {
      ojson p = ojson::object();
      std::string key;
      for (int v : scenario.primary_vars) {
        auto it = a.values.find(v);
        if (it == a.values.end()) continue;
        std::string g = group_to_string(it->second);
        p[var_name(v, scenario.var_labels)] = g;
        key += g + ";";
      }
      if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
        seen.push_back(key);
        possibilities.push_back(std::move(p));
      }
    }
    answer["derived_facts"] = res.stages.back().solution.derived_facts;
  } else {
    answer["derived_facts"] = ojson::array();
  }
  answer["possibilities"] = std::move(possibilities);
  // keep field order: possibilities first, then facts
  ojson ordered;
  ordered["possibilities"] = answer["possibilities"];
  ordered["derived_facts"] = answer["derived_facts"];
  j["answer"] = ordered;
  return j;
}

}  // namespace cil
