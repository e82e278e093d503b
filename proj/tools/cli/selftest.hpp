#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace fol::cli {

struct SelftestOptions {
  double root_residual = 1e-10;
  double ratio_band = 1e-6;
  double quad_tol = 1e-9;
  double rel_tol = 1e-10;
  std::uint64_t seed = 20240611;
  // Empty: all eight criteria.
  std::set<int> only;
  // Worker count for the repeated run of criterion 8.
  unsigned alternate_threads = 3;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_passed = false;
  // Measured quantities; deterministic for fixed options.
  std::string detail;
  double seconds = 0;
  double budget = 0;

  bool passed() const { return checks_passed && seconds < budget; }
};

std::vector<CriterionResult> run_selftest(const SelftestOptions& opt);

// One line per criterion.  Timings are left out unless requested, so the
// report is byte-identical between runs.
std::string format_report(const std::vector<CriterionResult>& results, bool timings = false);

} // namespace fol::cli
