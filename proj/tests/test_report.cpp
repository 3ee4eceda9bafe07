#include <doctest.h>

#include <complex>
#include <string>
#include <vector>

#include <cil/errors.hpp>
#include <cil/fedosov_index.hpp>
#include <cil/report.hpp>
#include <cil/symbol_library.hpp>
#include <cil/torus_grid.hpp>

#include "test_util.hpp"

using namespace cil;
using ojson = nlohmann::ordered_json;

namespace {

MatrixSymbol monomial(const TorusGrid& g, double p) {
  return sample_scalar(g, [p](const std::vector<double>& a) {
    return std::exp(std::complex<double>(0.0, p * a[0]));
  });
}

RunReport sample_report() {
  RunReport r;
  r.scenario = "monomial";
  r.kind = "winding";
  r.inputs["grid"] = std::vector<int>{32};
  r.inputs["power"] = 3;
  TorusGrid g({32});
  IndexReport idx = winding_number(monomial(g, 3.0));
  r.result = index_report_json(idx);
  r.citations = {"winding of a monomial loop equals its exponent"};
  r.seed = 12345;
  r.runtime_ms = 1.5;
  return r;
}

}  // namespace

TEST_CASE("reports round-trip through their serialized form") {
  RunReport r = sample_report();

  SUBCASE("pass unset") {}
  SUBCASE("pass true") { r.pass = true; }
  SUBCASE("pass false") { r.pass = false; }

  RunReport back = parse_report(serialize_report(r));
  CHECK(back == r);
  CHECK(back.pass == r.pass);
  CHECK(back.tool_version == std::string(kToolVersion));
  CHECK(std::string(kToolVersion) == "0.1.0");
}

TEST_CASE("serialized field order is frozen") {
  RunReport r = sample_report();
  std::string text = serialize_report(r);

  CHECK(text.find("\"schema\": 1") != std::string::npos);
  CHECK(text.find("\"pass\": null") != std::string::npos);  // unset renders as null

  const std::vector<std::string> order = {"\"schema\"",    "\"scenario\"", "\"kind\"",
                                          "\"inputs\"",    "\"result\"",   "\"citations\"",
                                          "\"pass\"",      "\"seed\"",     "\"runtime_ms\"",
                                          "\"tool_version\""};
  std::size_t prev = 0;
  for (const std::string& key : order) {
    std::size_t pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    CHECK(pos > prev);
    prev = pos;
  }
}

TEST_CASE("payload builders tag and shape their results") {
  TorusGrid g({32});
  IndexReport idx = winding_number(monomial(g, -2.0));
  ojson ij = index_report_json(idx);
  CHECK(ij.at("type") == "index_report");
  CHECK(ij.at("rounded") == -2);
  CHECK(ij.at("raw").contains("re"));
  CHECK(ij.at("raw").contains("im"));
  CHECK(ij.at("integral").contains("re"));
  CHECK(ij.at("contributions").is_array());
  CHECK(ij.at("grid") == std::vector<int>{32});
  CHECK(ij.contains("integrality_tol"));
  CHECK(ij.contains("min_singular_value"));

  KernelCount kc = fredholm_index(step_shift_operator(0));
  ojson kj = kernel_count_json(kc);
  CHECK(kj.at("type") == "kernel_count");
  CHECK(kj.at("ker_dim") == 0);
  CHECK(kj.at("coker_dim") == 1);
  CHECK(kj.at("index") == -1);
  CHECK(kj.at("certificate") == "exact_band");
  CHECK(kj.at("methods_agreeing") == std::vector<std::string>{"exact_band", "winding"});

  KTheoryScenario sc = builtin_ktheory_scenario("adagger");
  KTheoryScenarioResult res = solve_ktheory_scenario(sc, 12);
  ojson sj = solution_json(res.stages.back().solution, sc.var_labels);
  CHECK(sj.at("type") == "ktheory");
  REQUIRE(sj.at("assignments").size() == 1);
  const ojson& one = sj.at("assignments").at(0);
  CHECK(one.at("values").at("K0(A_dagger)") == "Z");
  CHECK(one.at("values").at("K1(A_dagger)") == "Z^2");
  CHECK(one.at("nodes").size() == 6);
  CHECK(one.at("images").size() == 6);
  CHECK(one.contains("trace"));
  CHECK(sj.contains("derived_facts"));

  ojson rj = ktheory_result_json(res, sc);
  CHECK(rj.at("type") == "ktheory");
  CHECK(rj.at("stages").size() == 3);
  CHECK(rj.at("stages").at(0).at("name") == "dagger_tower");
  REQUIRE(rj.at("answer").at("possibilities").size() == 1);
  CHECK(rj.at("answer").at("possibilities").at(0).at("K0(A_dagger)") == "Z");
  CHECK(rj.at("answer").contains("derived_facts"));

  // unlabeled variables fall back to positional names
  ojson plain = solution_json(res.stages.back().solution);
  CHECK(plain.at("assignments").at(0).at("values").contains("var0"));
}

TEST_CASE("malformed reports raise named validation errors") {
  ojson good = report_to_json(sample_report());
  CHECK_NOTHROW(report_from_json(good));

  ojson wrong_schema = good;
  wrong_schema["schema"] = 2;
  try {
    report_from_json(wrong_schema);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field == "schema");
  }

  ojson missing = good;
  missing.erase("scenario");
  try {
    report_from_json(missing);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field == "scenario");
  }

  ojson mistyped = good;
  mistyped["seed"] = "not a number";
  try {
    report_from_json(mistyped);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field == "seed");
  }

  ojson not_object = ojson::array();
  CHECK_THROWS_AS(report_from_json(not_object), ValidationError);
}

TEST_CASE("unparseable report text carries a line number") {
  try {
    parse_report("{\n  \"schema\": 1,\n  oops\n}\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_report(""), ParseError);
}
