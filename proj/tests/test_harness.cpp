#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include "indlim/suites.hpp"

using namespace indlim;
using nlohmann::json;

namespace {

SuiteConfig quick(const std::string& suite, int trials = 40) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.trials = trials;
  cfg.dim_min = 2;
  cfg.dim_max = 6;
  cfg.seed = 1234;
  return cfg;
}

const CheckResult* find_check(const SuiteReport& report, const std::string& id) {
  for (const auto& c : report.checks)
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("dims ranges parse") {
  int lo = 0, hi = 0;
  parse_dims("2..12", lo, hi);
  CHECK(lo == 2);
  CHECK(hi == 12);
  parse_dims("5", lo, hi);
  CHECK(lo == 5);
  CHECK(hi == 5);
  CHECK_THROWS_AS(parse_dims("x..y", lo, hi), ConfigInvalid);
}

TEST_CASE("mode and format parsing") {
  CHECK(parse_mode("rational") == ScalarMode::Rational);
  CHECK(parse_mode("float") == ScalarMode::Float);
  CHECK(parse_mode("auto") == ScalarMode::Auto);
  CHECK_THROWS_AS(parse_mode("exact"), ConfigInvalid);
  CHECK(parse_format("json") == OutputFormat::Json);
  CHECK_THROWS_AS(parse_format("xml"), ConfigInvalid);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(run_suite(quick("nope")), UnknownSuite);
  {
    auto cfg = quick("charts");
    cfg.tower = "torus";
    CHECK_THROWS_AS(run_suite(cfg), UnknownTower);
  }
  {
    auto cfg = quick("charts");
    cfg.trials = 0;
    CHECK_THROWS_AS(run_suite(cfg), ConfigInvalid);
  }
  {
    auto cfg = quick("charts");
    cfg.tol = 0.0;
    CHECK_THROWS_AS(run_suite(cfg), ConfigInvalid);
  }
  {
    auto cfg = quick("charts");
    cfg.dim_min = 9;
    cfg.dim_max = 3;
    CHECK_THROWS_AS(run_suite(cfg), ConfigInvalid);
  }
  {
    auto cfg = quick("cocycle");
    cfg.tower = "euclidean";
    CHECK_THROWS_AS(run_suite(cfg), ConfigInvalid);
  }
  {
    auto cfg = quick("derivative");
    cfg.mode = ScalarMode::Rational;
    CHECK_THROWS_AS(run_suite(cfg), ConfigInvalid);
  }
}

TEST_CASE("group suite passes exactly in rational mode") {
  auto cfg = quick("group", 60);
  cfg.mode = ScalarMode::Rational;
  const auto report = run_suite(cfg);
  CHECK(report.pass);
  for (const auto& c : report.checks) {
    CHECK(c.failures == 0);
    CHECK(c.trials == 60);
    CHECK_FALSE(c.max_residual.has_value());  // exact checks carry no residual
  }
}

TEST_CASE("every suite passes on the honest sphere tower") {
  for (const auto& [name, desc] : list_suites()) {
    if (name == "all") continue;
    CAPTURE(name);
    const auto report = run_suite(quick(name));
    CHECK(report.pass);
  }
}

TEST_CASE("fault-injected tower is detected by the diagram suite") {
  auto cfg = quick("diagram", 60);
  cfg.tower = "sphere-faulty";
  const auto report = run_suite(cfg);
  CHECK_FALSE(report.pass);
  const auto* commute = find_check(report, "diagram.commute");
  REQUIRE(commute != nullptr);
  CHECK(commute->failures > 0);
  CHECK(commute->counterexample.has_value());
}

TEST_CASE("reports are deterministic up to the duration field") {
  auto cfg = quick("charts", 25);
  cfg.format = OutputFormat::Json;
  auto a = json::parse(report_to_json(run_suite(cfg)));
  auto b = json::parse(report_to_json(run_suite(cfg)));
  a.erase("duration_ms");
  b.erase("duration_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("json reports follow the documented schema") {
  auto cfg = quick("cocycle", 10);
  const auto report = run_suite(cfg);
  const auto j = json::parse(report_to_json(report));
  REQUIRE(j.contains("suite"));
  REQUIRE(j.contains("config"));
  REQUIRE(j.contains("checks"));
  REQUIRE(j.contains("pass"));
  REQUIRE(j.contains("duration_ms"));
  CHECK(j["suite"] == "cocycle");
  for (const auto& key : {"tower", "suite", "dims", "trials", "seed", "tol", "mode", "format"})
    CHECK(j["config"].contains(key));
  REQUIRE(j["checks"].is_array());
  REQUIRE_FALSE(j["checks"].empty());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("id"));
    CHECK(c.contains("trials"));
    CHECK(c.contains("failures"));
    CHECK(c.contains("max_residual"));
    CHECK(c.contains("counterexample"));
  }
  // exact checks have null residuals, float checks numeric ones
  const auto* identity = find_check(report, "cocycle.identity");
  REQUIRE(identity != nullptr);
  CHECK_FALSE(identity->max_residual.has_value());
  const auto* compose_check = find_check(report, "cocycle.compose");
  REQUIRE(compose_check != nullptr);
  CHECK(compose_check->max_residual.has_value());
}

TEST_CASE("the all-suite aggregates every check and stays deterministic") {
  auto cfg = quick("all", 8);
  const auto report = run_suite(cfg);
  CHECK(report.pass);
  CHECK(report.suite == "all");
  CHECK(report.checks.size() >= 30);
  // sub-suite runs reproduce the aggregated rows
  const auto solo = run_suite(quick("charts", 8));
  for (const auto& c : solo.checks) {
    const auto* same = find_check(report, c.id);
    REQUIRE(same != nullptr);
    CHECK(same->failures == c.failures);
    CHECK(same->trials == c.trials);
  }
}

TEST_CASE("text reports carry one line per check") {
  const auto report = run_suite(quick("group", 10));
  const auto text = report_to_text(report);
  for (const auto& c : report.checks) CHECK(text.find(c.id) != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
}

TEST_CASE("float mode runs the chart suite within tolerance") {
  auto cfg = quick("charts", 60);
  cfg.mode = ScalarMode::Float;
  const auto report = run_suite(cfg);
  CHECK(report.pass);
  const auto* roundtrip = find_check(report, "charts.roundtrip");
  REQUIRE(roundtrip != nullptr);
  REQUIRE(roundtrip->max_residual.has_value());
  CHECK(*roundtrip->max_residual <= cfg.tol);
}
