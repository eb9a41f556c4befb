// Acceptance runner: one line per criterion, exit 0 iff every criterion passes.
// Usage: ltlab_acceptance [REPORT.json]
#include <iostream>

#include "ltlab/acceptance.hpp"
#include "ltlab/report.hpp"

int main(int argc, char** argv) {
  using namespace ltlab::cli;
  const auto res = run_acceptance(AcceptanceOptions{}, &std::cerr);
  for (const auto& c : res.criteria) std::cout << format_line(c) << "\n";
  std::cout << (res.all_pass ? "ACCEPT PASS" : "ACCEPT FAIL") << std::endl;
  if (argc > 1) write_text(argv[1], dump_report(res.report));
  return res.all_pass ? 0 : 1;
}
