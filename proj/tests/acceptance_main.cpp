// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// hard failure. Budgets follow the verification defaults; QSEP_ACCEPT_FAST=1
// scales the Monte Carlo parts down for quick local iteration.

#include <cstdlib>
#include <iostream>

#include "qsep/verify.hpp"

int main() {
  qsep::VerifyOptions opt;
  if (const char* fast = std::getenv("QSEP_ACCEPT_FAST"); fast && fast[0] == '1') {
    opt.mc_samples = 1'000'000;
    opt.sampler_samples = 200'000;
  }
  const qsep::VerifyReport rep = qsep::run_verification(opt, &std::cout);
  int hard_fails = 0;
  bool only_quoted_rows = true;
  for (const auto& r : rep.results)
    if (r.hard && !r.pass) {
      ++hard_fails;
      if (r.id.find("as-quoted") == std::string::npos)
        only_quoted_rows = false;
    }
  std::cout << "----\n"
            << rep.results.size() << " criteria, " << hard_fails
            << " hard failure(s)" << std::endl;
  if (hard_fails > 0 && only_quoted_rows)
    std::cout << "note: the failing rows check literature closed forms that "
                 "a direct eigenvalue-level partial-transpose oracle "
                 "contradicts; see the matching *-corrected rows and the "
                 "README.\n";
  return rep.all_pass() ? 0 : 1;
}
