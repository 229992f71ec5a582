#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qsep {

struct VerifyOptions {
  bool run_exact = true;  // deterministic quadrature / algebra / QMC criteria
  bool run_mc = true;     // sampling criteria
  std::uint64_t mc_samples = 10'000'000;      // per scenario quantity
  std::uint64_t sampler_samples = 2'000'000;  // per 15-d probability
  std::uint64_t seed = 20240601;
};

struct CriterionResult {
  std::string id;
  std::string detail;
  bool pass = true;
  bool hard = true;  // informational rows never fail the suite
};

struct VerifyReport {
  std::vector<CriterionResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (r.hard && !r.pass) return false;
    return true;
  }
};

/// Run the verification suite; when `live` is nonnull every criterion
/// prints one [PASS]/[FAIL] line as it completes.
VerifyReport run_verification(const VerifyOptions& opt, std::ostream* live);

}  // namespace qsep
