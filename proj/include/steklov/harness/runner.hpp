#pragma once

#include "steklov/harness/report.hpp"
#include "steklov/harness/run_spec.hpp"
#include "steklov/solver.hpp"

namespace steklov {

struct RunOutcome {
  SolverResult result;
  ReportSummary summary;
};

/// Runs the configured solver (and baseline), writes the trace and summary
/// files when paths are set. Unknown problems raise ConfigError.
RunOutcome run_from_spec(const RunSpec& spec);

/// First record index (1-based k) whose iterate is within `target` of the minimizer.
std::optional<int> iterations_to_reach(const std::vector<IterationRecord>& records, const Vector& minimizer,
                                       double target);

}  // namespace steklov
