#include "cli/selftest.hpp"

#include <iostream>

int main() {
  const fol::cli::SelftestOptions opt;
  const auto results = fol::cli::run_selftest(opt);
  std::cout << fol::cli::format_report(results, true);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed();
  return results.size() == 8 && failed == 0 ? 0 : 1;
}
