#pragma once

// Property battery behind `phasekit verify`: every module invariant, run on
// seeded random instances sized from (p, k, n).

#include <cstdint>
#include <string>
#include <vector>

namespace phasekit {

struct VerifyConfig {
  unsigned p = 2;
  unsigned k = 4;
  unsigned n = 3;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  /// Random instances per property.
  unsigned trials = 20;
};

struct VerifyFailure {
  std::string suite;
  std::string check;
  std::string detail;
};

struct VerifyReport {
  std::uint64_t checks = 0;
  std::vector<std::string> suites;
  std::vector<VerifyFailure> failures;
  bool passed() const noexcept { return failures.empty(); }
};

/// fp, poly, gowers, quasisym, symmetrize, hyperplane, search, json.
const std::vector<std::string>& verify_suites();

/// `suite` is one of verify_suites() or "all". Throws Error on an unknown
/// suite name or invalid parameters; property violations go in the report.
VerifyReport run_verify(const std::string& suite, const VerifyConfig& config);

}  // namespace phasekit
