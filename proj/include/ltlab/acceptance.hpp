#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ltlab/report.hpp"

namespace ltlab::cli {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<Assertion> checks;
  json data = json::object();
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  /// Test-harness fault injection: "k_sc" perturbs the kinetic constant
  /// used by criterion 1.
  std::string fault;
  /// Criterion 15 reruns the suite and compares report bytes.
  bool check_determinism = true;
};

struct AcceptanceOutcome {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  json report;
};

/// Runs criteria 1..15; progress (including timings, which stay out of the
/// report) goes to `progress` when non-null.
AcceptanceOutcome run_acceptance(const AcceptanceOptions& opt, std::ostream* progress = nullptr);

/// One "Cnn PASS|FAIL title | check=value (tol ...)" line.
std::string format_line(const CriterionResult& c);

}  // namespace ltlab::cli
