#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgrp/core.hpp"
#include "lgrp/suite.hpp"

using namespace lgrp;

namespace {

Elem zelem(long v) {
  return make_elem(Descriptor::integers(), {Int(v)});
}

LawReport passing_report(const std::string& law) {
  LawReport r;
  r.instance = "Z";
  r.law = law;
  r.samples = 10;
  r.finalize();
  return r;
}

LawReport failing_report(const std::string& law) {
  LawReport r;
  r.instance = "Z";
  r.law = law;
  r.samples = 10;
  r.record(Violation{{zelem(1)}, zelem(2), zelem(3), "synthetic"});
  r.finalize();
  return r;
}

SuiteRow fixed_row(std::string id, SuiteExpectation expected,
                   std::vector<LawReport> reports) {
  SuiteRow row;
  row.id = std::move(id);
  row.module = "test";
  row.parameters = "synthetic";
  row.expected = expected;
  row.run = [reports](const SamplerConfig&) { return reports; };
  return row;
}

}  // namespace

TEST_CASE("standard manifest is well formed and frozen in order") {
  const SuiteManifest m = SuiteManifest::standard();

  const std::vector<std::string> expected_ids = {
      "laws.Z",
      "laws.Z^2",
      "laws.Z^3",
      "laws.lex(Z,Z)",
      "laws.lex(Z^2,Z)",
      "laws.quot(Z^3,{0})",
      "morphism.random-valid",
      "morphism.random-violators",
      "convexity.coordinate-ideals",
      "convexity.diagonal-witness",
      "polar.disjoint-pairs",
      "polar.overlapping-pairs",
      "commutator.oracle-agreement",
      "ideals.distributive-lattice",
      "refuter.internal-group-Z",
      "refuter.internal-group-Z^2",
      "extension.phi-iso-lex",
      "extension.phi-iso-product",
      "extension.polar-section",
      "extension.self-maps-commute",
      "extension.self-maps-differ",
      "points.centralizer-action",
      "points.cooperator-agreement",
      "coherence.product-lines",
      "coherence.lex-multiples",
      "coherence.self-join",
      "nf.soundness",
      "nf.identities-survive",
      "determinism.report-replay",
  };

  std::vector<std::string> ids;
  for (const SuiteRow& row : m.rows) ids.push_back(row.id);
  CHECK(ids == expected_ids);

  std::set<std::string> unique_ids(ids.begin(), ids.end());
  CHECK(unique_ids.size() == ids.size());

  // Counterexample searches are exactly these rows; everything else expects
  // clean passes.
  const std::set<std::string> expect_witness = {
      "morphism.random-violators", "convexity.diagonal-witness",
      "polar.overlapping-pairs",   "refuter.internal-group-Z",
      "refuter.internal-group-Z^2"};
  const std::set<std::string> allowed_modules = {"core", "subobjects", "extensions",
                                                 "termlang", "suite"};
  for (const SuiteRow& row : m.rows) {
    CHECK(static_cast<bool>(row.run));
    CHECK_FALSE(row.parameters.empty());
    CHECK(allowed_modules.count(row.module) == 1);
    const bool wants_witness = expect_witness.count(row.id) == 1;
    CHECK(row.expected ==
          (wants_witness ? SuiteExpectation::fail_with_witness : SuiteExpectation::pass));
  }

  CHECK(m.sampler.seed == 0);
  CHECK(m.sampler.box == 16);
  CHECK(m.sampler.samples == 10000);

  // A non-default sampler is carried through verbatim.
  SamplerConfig custom{42, 8, 500};
  const SuiteManifest scaled = SuiteManifest::standard(custom);
  CHECK(scaled.sampler.seed == 42);
  CHECK(scaled.sampler.samples == 500);
  CHECK(scaled.rows.size() == m.rows.size());
}

TEST_CASE("run_suite matches expectations and flags mismatches") {
  SuiteManifest m;
  m.sampler = SamplerConfig{0, 4, 10};
  m.rows.push_back(fixed_row("alpha", SuiteExpectation::pass,
                             {passing_report("a.one"), passing_report("a.two")}));
  m.rows.push_back(
      fixed_row("beta", SuiteExpectation::fail_with_witness, {failing_report("b.one")}));
  m.rows.push_back(fixed_row("gamma", SuiteExpectation::pass, {failing_report("c.one")}));

  const SuiteRunResult result = run_suite(m);
  REQUIRE(result.rows.size() == 3);

  CHECK(result.rows[0].observed == "pass");
  CHECK(result.rows[0].matched);
  CHECK(result.rows[0].reports.size() == 2);

  CHECK(result.rows[1].observed == "fail-with-witness");
  CHECK(result.rows[1].matched);

  CHECK(result.rows[2].observed == "fail-with-witness");
  CHECK_FALSE(result.rows[2].matched);
  CHECK_FALSE(result.all_matched);

  // Mixed outcomes and empty report lists are neither pass nor
  // fail-with-witness.
  SuiteManifest mixed;
  mixed.sampler = m.sampler;
  mixed.rows.push_back(fixed_row("mixed", SuiteExpectation::pass,
                                 {passing_report("m.one"), failing_report("m.two")}));
  mixed.rows.push_back(fixed_row("empty", SuiteExpectation::pass, {}));
  LawReport unfinished;  // inconclusive-only: no violation stored
  unfinished.instance = "Z";
  unfinished.law = "m.three";
  unfinished.samples = 10;
  unfinished.inconclusive = 3;
  unfinished.finalize();
  mixed.rows.push_back(
      fixed_row("undecided", SuiteExpectation::pass, {unfinished}));

  const SuiteRunResult mixed_result = run_suite(mixed);
  CHECK(mixed_result.rows[0].observed == "inconclusive");
  CHECK(mixed_result.rows[1].observed == "inconclusive");
  CHECK(mixed_result.rows[2].observed == "inconclusive");
  CHECK_FALSE(mixed_result.all_matched);
}

TEST_CASE("run_suite rejects malformed manifests") {
  SuiteManifest empty;
  empty.sampler = SamplerConfig{0, 4, 10};
  CHECK_THROWS_AS(run_suite(empty), StructuralError);

  SuiteManifest dup;
  dup.sampler = SamplerConfig{0, 4, 10};
  dup.rows.push_back(fixed_row("same", SuiteExpectation::pass, {passing_report("x")}));
  dup.rows.push_back(fixed_row("same", SuiteExpectation::pass, {passing_report("y")}));
  CHECK_THROWS_WITH_AS(run_suite(dup), "duplicate suite row id: same", StructuralError);

  SuiteManifest zero;
  zero.sampler = SamplerConfig{0, 4, 0};
  zero.rows.push_back(fixed_row("ok", SuiteExpectation::pass, {passing_report("x")}));
  CHECK_THROWS_AS(run_suite(zero), StructuralError);

  SuiteManifest no_runner;
  no_runner.sampler = SamplerConfig{0, 4, 10};
  SuiteRow hollow;
  hollow.id = "hollow";
  hollow.module = "test";
  hollow.parameters = "no runner";
  hollow.expected = SuiteExpectation::pass;
  no_runner.rows.push_back(std::move(hollow));
  CHECK_THROWS_AS(run_suite(no_runner), StructuralError);
}

TEST_CASE("ndjson serialization is deterministic and shaped as documented") {
  SuiteManifest m;
  m.sampler = SamplerConfig{7, 4, 10};
  m.rows.push_back(fixed_row("alpha", SuiteExpectation::pass, {passing_report("a.one")}));
  m.rows.push_back(
      fixed_row("beta", SuiteExpectation::fail_with_witness, {failing_report("b.one")}));

  const SuiteRunResult first = run_suite(m);
  const SuiteRunResult second = run_suite(m);

  std::ostringstream out1, out2;
  write_suite_ndjson(first, out1);
  write_suite_ndjson(second, out2);
  CHECK(out1.str() == out2.str());

  std::istringstream lines(out1.str());
  std::string line;
  std::vector<nlohmann::ordered_json> parsed;
  while (std::getline(lines, line)) {
    parsed.push_back(nlohmann::ordered_json::parse(line));
  }
  REQUIRE(parsed.size() == 2);

  const auto& alpha = parsed[0];
  CHECK(alpha["suiteId"] == "alpha");
  CHECK(alpha["module"] == "test");
  CHECK(alpha["expected"] == "pass");
  CHECK(alpha["observed"] == "pass");
  CHECK(alpha["matched"] == true);
  CHECK(alpha["reports"].is_array());
  CHECK(alpha["reports"].size() == 1);
  CHECK(alpha["reports"][0]["law"] == "a.one");
  // Integers ride as decimal strings end to end.
  CHECK(alpha["reports"][0]["samples"] == "10");

  const auto& beta = parsed[1];
  CHECK(beta["suiteId"] == "beta");
  CHECK(beta["matched"] == true);
  CHECK(beta["observed"] == "fail-with-witness");
  CHECK(beta["reports"][0]["violations"].size() == 1);
  CHECK(beta["reports"][0]["violations"][0]["note"] == "synthetic");

  // Key order is part of the byte-determinism contract.
  std::vector<std::string> keys;
  for (auto it = alpha.begin(); it != alpha.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"suiteId", "module", "parameters", "expected",
                                         "observed", "matched", "reports"});

  // Timings never leak into the serialized form.
  CHECK(out1.str().find("elapsed") == std::string::npos);
  CHECK(out1.str().find("ms") == std::string::npos);
}

TEST_CASE("human summary shows one line per row and a verdict") {
  SuiteManifest m;
  m.sampler = SamplerConfig{0, 4, 10};
  m.rows.push_back(fixed_row("alpha", SuiteExpectation::pass, {passing_report("a.one")}));
  m.rows.push_back(fixed_row("gamma", SuiteExpectation::pass, {failing_report("c.one")}));

  std::ostringstream out;
  write_suite_summary(run_suite(m), out);
  const std::string text = out.str();

  CHECK(text.find("alpha") != std::string::npos);
  CHECK(text.find("gamma") != std::string::npos);
  CHECK(text.find("MISMATCH") != std::string::npos);
  CHECK(text.find("suite verdict: 1/2 rows matched") != std::string::npos);
}

TEST_CASE("scaled-down standard manifest runs clean end to end") {
  // The full-size run is the acceptance gate's job; here a reduced sample
  // count exercises every row's machinery, and the reduced run must still
  // match every expectation.
  SamplerConfig cfg{0, 8, 300};
  const SuiteManifest m = SuiteManifest::standard(cfg);
  const SuiteRunResult result = run_suite(m);

  for (const SuiteRowResult& row : result.rows) {
    CAPTURE(row.id);
    CAPTURE(row.observed);
    CHECK(row.matched);
  }
  CHECK(result.all_matched);

  std::ostringstream out1, out2;
  write_suite_ndjson(result, out1);
  write_suite_ndjson(run_suite(m), out2);
  CHECK(out1.str() == out2.str());
}
