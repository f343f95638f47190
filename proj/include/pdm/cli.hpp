#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pdm/dataset.hpp"

namespace pdm::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kDomainError = 3,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Data goes to `out` (or --output), diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Parses "v", "v1,v2,...", "a..b" or "a..b:steps" (steps intervals, both
/// ends included, 50 when omitted). Throws DomainError on malformed input.
std::vector<double> parse_real_list(const std::string& text);

/// Parses "n", "n1,n2,..." or "a..b" (inclusive).
std::vector<int> parse_int_list(const std::string& text);

struct CheckOutcome {
  Dataset data;
  bool all_passed = true;
};

/// The invariant suite behind `check`.
CheckOutcome run_check_suite();

}  // namespace pdm::cli
