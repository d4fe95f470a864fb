#ifndef LGRP_SUITE_HPP
#define LGRP_SUITE_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lgrp/core.hpp"

// The standard verification suite: a fixed, ordered manifest of checks
// spanning all four library modules, with an expected outcome per row.
// Counterexample searches are first-class rows — they EXPECT to fail with a
// stored witness, and succeed by finding one.

namespace lgrp {

enum class SuiteExpectation { pass, fail_with_witness };
std::string to_string(SuiteExpectation e);

struct SuiteRow {
  std::string id;          // unique within the manifest
  std::string module;      // library module exercised
  std::string parameters;  // human-readable parameter summary
  SuiteExpectation expected;
  // Produces one report per checked object; the row matches its expectation
  // when either every report passes (expected pass) or every report fails
  // with at least one stored witness (expected fail-with-witness).
  std::function<std::vector<LawReport>(const SamplerConfig&)> run;
};

struct SuiteManifest {
  std::vector<SuiteRow> rows;
  SamplerConfig sampler;

  // The full battery: law suites on the six stock instances, morphism
  // shortcut spot checks, convexity/polar/commutator/distributivity rows, the
  // internal-group refuters, semidirect reconstruction, extension self-maps,
  // points-category rows, coherence join closures, normal-form soundness and
  // identity refutation, and a report-replay determinism row.
  static SuiteManifest standard(SamplerConfig cfg = {});
};

struct SuiteRowResult {
  std::string id;
  std::string module;
  std::string parameters;
  SuiteExpectation expected;
  std::string observed;  // "pass", "fail-with-witness", or "inconclusive"
  bool matched = false;
  std::vector<LawReport> reports;
  double elapsed_ms = 0.0;  // wall clock; never serialized to JSON
};

struct SuiteRunResult {
  std::vector<SuiteRowResult> rows;
  bool all_matched = true;
};

// Runs every row in manifest order.  Throws StructuralError when the manifest
// is malformed (no rows, duplicate ids, or a zero sample count).
SuiteRunResult run_suite(const SuiteManifest& manifest);

// One JSON object per row, newline-delimited, in manifest order; integers are
// decimal strings.  Byte-identical across runs with the same configuration
// (wall-clock times are deliberately excluded).
void write_suite_ndjson(const SuiteRunResult& result, std::ostream& out);

// Aligned human-readable table plus a one-line verdict, with timings.
void write_suite_summary(const SuiteRunResult& result, std::ostream& out);

}  // namespace lgrp

#endif  // LGRP_SUITE_HPP
