#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kproc {

/// One measured quantity of the verification suite. A check passes when
/// `measured < tolerance` (and any extra condition recorded in `note` holds).
struct CheckResult {
  int criterion = 0;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 20250101;
  /// Criteria to run (1..9); empty runs all.
  std::set<int> only;
  /// Replaces every tolerance when set.
  std::optional<double> tolerance_override;
};

/// Criteria 1-3: deterministic quadrature identities, no randomness.
inline const std::set<int> kQuadratureCriteria{1, 2, 3};

std::vector<CheckResult> run_verify(const VerifyOptions& options);

/// Runs a single criterion; unknown ids throw std::out_of_range.
std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options);

bool all_pass(const std::vector<CheckResult>& results);

/// Deterministic JSON report (no timings), newline terminated.
std::string verify_report_json(const std::vector<CheckResult>& results);

}  // namespace kproc
