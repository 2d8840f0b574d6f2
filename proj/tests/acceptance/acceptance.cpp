// Runs criteria 1-9 and prints one PASS/FAIL line per criterion. Tolerances
// are the ones pinned in src/verify.cpp. Exit status is 1 if any criterion
// fails.

#include <cstdio>
#include <string>
#include <vector>

#include "kproc/verify.hpp"

int main() {
  kproc::VerifyOptions options;
  bool ok = true;
  for (int criterion = 1; criterion <= 9; ++criterion) {
    const std::vector<kproc::CheckResult> rows = kproc::run_criterion(criterion, options);
    const bool pass = kproc::all_pass(rows);
    ok = ok && pass;
    std::string detail;
    for (const auto& r : rows) {
      char buf[256];
      std::snprintf(buf, sizeof buf, " | %s measured=%.4g tolerance=%.4g", r.name.c_str(), r.measured, r.tolerance);
      detail += buf;
      if (!r.note.empty()) detail += " (" + r.note + ")";
    }
    std::printf("[%s] criterion %d%s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
