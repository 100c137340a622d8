#pragma once

#include "steklov/corpus.hpp"
#include "steklov/harness/run_spec.hpp"
#include "steklov/solver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace steklov {

struct RateEstimate {
  std::vector<double> ratios;  // ||step_{k+1}|| / ||step_k||
  bool superlinear_flag = false;
};

/// Needs at least 3 records (InsufficientData otherwise). The flag is set iff
/// the last min(5, len-1) ratios strictly decrease and the final one is < 0.5.
RateEstimate estimate_rate(const std::vector<IterationRecord>& records);
RateEstimate estimate_rate_from_norms(const std::vector<double>& step_norms);

struct ReportSummary {
  std::string problem;
  int dim = 1;
  std::string algorithm;
  std::string estimator;
  std::string stop_reason;
  int iterations = 0;
  Vector x_final;
  double final_radius = 0.0;
  double distance_to_known_minimizer = 0.0;
  double eps2d_radius = 0.0;
  bool eps2d_satisfied = false;
  double final_ratio = 0.0;
  std::vector<double> ratio_series;
  bool superlinear_flag = false;
  std::optional<double> wall_time;
  std::optional<int> baseline_iterations;  // iterations the baseline needed to get as close as the run did
};

/// Builds the summary of a finished run (wall time and baseline left empty).
ReportSummary summarize(const RunSpec& spec, const ObjectiveSpec& objective, const SolverResult& result);

/// The same summary rebuilt from a trace file alone.
ReportSummary summary_from_trace(const RunSpec& spec, const ObjectiveSpec& objective,
                                 const std::vector<IterationRecord>& records);

std::string to_json(const ReportSummary& summary);
ReportSummary summary_from_json(std::string_view text);

/// Field-by-field equality, ignoring wall time and baseline.
bool same_outcome(const ReportSummary& a, const ReportSummary& b);

}  // namespace steklov
