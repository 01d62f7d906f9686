#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phopfield/harness/config.hpp"

namespace phopfield::harness {

/// Each command writes into <out>/<command>-<config hash>/ and returns the
/// process exit code. Progress goes to `log`.
struct RunOutcome {
  int exit_code = 0;
  std::string directory;
};

RunOutcome cmd_distribution(const RunConfig& config, std::ostream& log);
RunOutcome cmd_mc(const RunConfig& config, std::ostream& log);
RunOutcome cmd_phase_diagram(const RunConfig& config, std::ostream& log);
RunOutcome cmd_hopfield(const RunConfig& config, std::ostream& log);

struct OracleCheck {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  /// Evaluate the normalization oracle with the occupation-product
  /// multiplicity; it must then fail.
  bool corrupt_multiplicity = false;
};

std::vector<OracleCheck> run_oracle_suite(const ValidateOptions& options);
/// Prints one line per oracle; exit code 0 iff all pass.
int cmd_validate(const ValidateOptions& options, std::ostream& log);

/// Default Hadamard rows for M: all +1, and +1 on the first half / -1 on the second.
std::vector<std::vector<int>> default_hadamard_rows(int mode_count);

}  // namespace phopfield::harness
