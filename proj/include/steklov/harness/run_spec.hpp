#pragma once

#include "steklov/solver.hpp"

#include <string>
#include <string_view>

namespace steklov {

/// Everything needed to reproduce one run. Serialized as JSON.
struct RunSpec {
  std::string problem = "abs1d";
  int dim = 1;
  SolverConfig solver;  // x0 empty means all ones
  bool baseline = false;
  double baseline_a0 = 1.0;
  int baseline_max_iters = 1000000;
  std::string trace_path;    // empty: no trace file
  std::string summary_path;  // empty: no summary file
  bool record_wall_time = false;
};

/// Default RunSpec with the closed-form estimator selected.
RunSpec default_run_spec();

std::string to_json(const RunSpec& spec);

/// Missing keys keep their defaults; unknown keys and bad values raise ConfigError.
RunSpec run_spec_from_json(std::string_view text, const RunSpec& defaults = default_run_spec());
RunSpec load_run_spec(const std::string& path, const RunSpec& defaults = default_run_spec());

/// Parses "1,2.5,-3" into a vector; raises ConfigError on malformed input.
Vector parse_csv_vector(std::string_view text);

/// Starting point of the run: solver.x0, or all ones when empty.
Vector resolved_x0(const RunSpec& spec);

}  // namespace steklov
