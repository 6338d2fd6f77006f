#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "planefield/verify.hpp"

using namespace planefield;

namespace {

Json one_check(Json overrides) {
  Json c{{"name", "c"},
         {"target", "builtin:torus-flat"},
         {"operation", "frobenius_residual_max"},
         {"tolerance", 1e-10},
         {"grid", {3, 3, 3}}};
  if (overrides.is_object()) c.update(overrides);
  return {{"suite", "t"}, {"checks", Json::array({c})}};
}

}  // namespace

TEST_CASE("malformed suites are configuration errors") {
  CHECK_THROWS_AS((void)parse_suite(one_check({{"tolerance", -1.0}})), ConfigError);
  CHECK_THROWS_AS((void)parse_suite(one_check({{"tolerance", 0.0}})), ConfigError);
  CHECK_THROWS_AS((void)parse_suite(one_check({{"operation", "no_such_op"}})), ConfigError);
  CHECK_THROWS_AS((void)parse_suite(one_check({{"grid", {3, 3}}})), ConfigError);
  CHECK_THROWS_AS((void)parse_suite(one_check({{"expectation", {{"kind", "roughly"}}}})), ConfigError);
  CHECK_THROWS_AS((void)parse_suite(one_check({{"expectation", {{"kind", "at_least"}}}})), ConfigError);
  CHECK_THROWS_AS((void)parse_suite(one_check({{"expectation", {{"kind", "classification"}, {"value", "round"}}}})),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_suite(Json::array()), ConfigError);
  CHECK_THROWS_AS((void)load_suite("/nonexistent/suite.json"), ConfigError);
  CHECK_THROWS_AS((void)builtin_suite("nope"), ConfigError);
  CHECK_NOTHROW((void)parse_suite(one_check({})));
}

TEST_CASE("empty suite passes vacuously") {
  const SuiteReport r = run_suite(parse_suite({{"suite", "nothing"}, {"checks", Json::array()}}));
  CHECK(r.passed);
  CHECK(r.checks.empty());
  const Json j = suite_report_to_json(r, false);
  CHECK(j["passed"] == true);
  CHECK(j["total"] == 0);
  CHECK(j["note"].get<std::string>().find("vacuous") != std::string::npos);
}

TEST_CASE("check errors become failures without aborting the suite") {
  const Json doc{{"suite", "mixed"},
                 {"checks",
                  Json::array({{{"name", "missing"},
                                {"target", "/nonexistent/chart.json"},
                                {"operation", "classify"},
                                {"tolerance", 1e-8},
                                {"expectation", {{"kind", "classification"}, {"value", "parabolic"}}}},
                               {{"name", "bad-model"},
                                {"target", "builtin:nope"},
                                {"operation", "classify"},
                                {"tolerance", 1e-8}},
                               {{"name", "ok"},
                                {"target", "builtin:torus-flat"},
                                {"operation", "frobenius_residual_max"},
                                {"tolerance", 1e-10},
                                {"grid", {3, 3, 3}}}})}};
  const SuiteReport r = run_suite(parse_suite(doc));
  REQUIRE(r.checks.size() == 3);
  CHECK_FALSE(r.passed);
  CHECK_FALSE(r.checks[0].passed);
  CHECK(r.checks[0].error_kind == "ConfigError");
  CHECK_FALSE(r.checks[1].passed);
  CHECK(r.checks[1].error_kind.has_value());
  CHECK(r.checks[2].passed);
  const Json j = suite_report_to_json(r, false);
  CHECK(j["failed"] == 2);
  CHECK(j["checks"][0]["error"]["kind"] == "ConfigError");
}

TEST_CASE("expectation kinds") {
  // standard contact form: volume 2 everywhere
  Json c = one_check({{"target", "builtin:standard-contact"},
                      {"operation", "contact_volume_min_abs"},
                      {"tolerance", 1e-12},
                      {"expectation", {{"kind", "equals"}, {"value", 2.0}}}});
  CHECK(run_suite(parse_suite(c)).passed);
  c["checks"][0]["expectation"]["value"] = 2.1;
  CHECK_FALSE(run_suite(parse_suite(c)).passed);

  Json at_least = one_check({{"target", "builtin:standard-contact"},
                             {"operation", "frobenius_residual_min_abs"},
                             {"tolerance", 1.0},
                             {"expectation", {{"kind", "at_least"}, {"value", 0.4}}}});
  CHECK(run_suite(parse_suite(at_least)).passed);
  at_least["checks"][0]["expectation"]["value"] = 100.0;
  CHECK_FALSE(run_suite(parse_suite(at_least)).passed);

  Json cls = one_check({{"target", "builtin:spheres"},
                        {"operation", "classify"},
                        {"tolerance", 1e-8},
                        {"grid", {4, 4, 4}},
                        {"expectation", {{"kind", "classification"}, {"value", "elliptic"}}}});
  const SuiteReport r = run_suite(parse_suite(cls));
  CHECK(r.passed);
  CHECK(r.checks[0].classification == "elliptic");
  cls["checks"][0]["expectation"] = {{"kind", "not_classification"}, {"value", "elliptic"}};
  CHECK_FALSE(run_suite(parse_suite(cls)).passed);

  // a foliation is integrable, so at_most on the residual passes and a
  // tight at_most on a contact form fails
  CHECK(run_suite(parse_suite(one_check({}))).passed);
  CHECK_FALSE(run_suite(parse_suite(one_check({{"target", "builtin:standard-contact"}}))).passed);
}

TEST_CASE("suite reports are reproducible") {
  const SuiteSpec spec = builtin_suite("fibration-product");
  const std::string a = suite_report_to_json(run_suite(spec, {1}), false).dump();
  const std::string b = suite_report_to_json(run_suite(spec, {3}), false).dump();
  CHECK(a == b);
  const Json timed = suite_report_to_json(run_suite(spec), true);
  CHECK(timed.contains("timings"));
  CHECK_FALSE(Json::parse(a).contains("timings"));
}

TEST_CASE("suite files load from disk") {
  const std::string path = "test_verify_suite.json";
  {
    std::ofstream out(path);
    out << one_check({}).dump(2);
  }
  const SuiteSpec s = load_suite(path);
  CHECK(s.suite == "t");
  REQUIRE(s.checks.size() == 1);
  CHECK(s.checks[0].grid == GridCounts{3, 3, 3});
  std::remove(path.c_str());
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS((void)load_suite(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("builtin suites pass") {
  for (const auto& name : builtin_suite_names()) {
    const SuiteReport r = run_suite(builtin_suite(name), {4});
    INFO(suite_report_to_json(r, false).dump(2));
    CHECK(r.passed);
    CHECK_FALSE(r.checks.empty());
    // the document form parses back to the same suite
    CHECK(parse_suite(builtin_suite_json(name)).checks.size() == r.checks.size());
  }
}
