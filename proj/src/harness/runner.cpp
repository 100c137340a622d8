#include "steklov/harness/runner.hpp"

#include "steklov/harness/baseline.hpp"
#include "steklov/harness/io.hpp"
#include "steklov/harness/trace.hpp"

#include <chrono>

namespace steklov {

std::optional<int> iterations_to_reach(const std::vector<IterationRecord>& records, const Vector& minimizer,
                                       double target) {
  for (const auto& r : records) {
    if ((r.x - minimizer).norm() <= target) return r.k - 1;  // updates applied before reaching x_k
  }
  return std::nullopt;
}

RunOutcome run_from_spec(const RunSpec& spec) {
  const ObjectiveSpec objective = make_objective(spec.problem, spec.dim);
  SolverConfig cfg = spec.solver;
  cfg.x0 = resolved_x0(spec);

  const auto start = std::chrono::steady_clock::now();
  RunOutcome out{run_solver(objective, cfg), {}};
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  out.summary = summarize(spec, objective, out.result);
  if (spec.record_wall_time) out.summary.wall_time = elapsed;
  if (spec.baseline && objective.minimizer) {
    const BaselineReport base =
        run_baseline_subgradient(objective, cfg.x0, {StepRuleKind::harmonic, spec.baseline_a0},
                                 spec.baseline_max_iters, out.summary.distance_to_known_minimizer);
    if (base.iterations_to_target) out.summary.baseline_iterations = *base.iterations_to_target;
  }

  if (!spec.trace_path.empty()) write_file_atomic(spec.trace_path, trace_csv(out.result.records, objective.dim));
  if (!spec.summary_path.empty()) write_file_atomic(spec.summary_path, to_json(out.summary));
  return out;
}

}  // namespace steklov
