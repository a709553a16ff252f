// oracle_suite.hpp — the canned battery of truncated-Fock-space checks that
// validates every closed-form identity in the library against brute-force
// matrix arithmetic. Used by the CLI `verify` subcommand and the
// `oracle-check` experiment.

#pragma once

#include "mpdyn/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpdyn::oracle {

struct CheckResult {
  std::string name;
  double value;      // measured residual / deviation
  double tolerance;  // pinned bound
  bool pass;
  std::string note;  // extra context (realized sign, guard trips, ...)
};

struct VerifyReport {
  int cutoff;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

// Runs the full suite. `cutoff` sets the single-mode truncation (default 30);
// two-mode checks run at per-mode cutoff min(cutoff, 20). The probe states are
// canned; a seed adds extra randomized Weyl pairs on top of the canned ones.
VerifyReport verify_all(int cutoff = 30, std::optional<std::uint64_t> seed = std::nullopt);

// Fixed-width text table, one line per check plus a summary line.
std::string format_table(const VerifyReport& report);

}  // namespace mpdyn::oracle
