#ifndef RELAY_CLI_VERIFY_HPP
#define RELAY_CLI_VERIFY_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace relay::cli {

struct VerifyOptions {
  bool quick = false;     // 10^4 samples instead of 10^5
  double perturb = 0.0;   // scalar-side gains are multiplied by (1 + perturb)
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // worst case, or the failing configuration
};

/// Oracle-equivalence and property checks: training simulator vs closed
/// form, log-det vs scalar AF, grid vs closed-form training fraction,
/// quadrature vs Monte Carlo, and DF coding dominance.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

void print_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace relay::cli

#endif  // RELAY_CLI_VERIFY_HPP
