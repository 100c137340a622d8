#include "steklov/harness/baseline.hpp"

namespace steklov {

BaselineReport run_baseline_subgradient(const ObjectiveSpec& spec, const Eigen::Ref<const Vector>& x0,
                                        const StepRule& rule, int max_iters, std::optional<double> target_distance) {
  require_dim(x0.size(), spec.dim, "baseline x0");
  if (!(rule.a0 > 0.0)) throw InvalidInput("baseline step size must be positive");
  if (max_iters < 0) throw InvalidInput("baseline max_iters must be non-negative");
  if (target_distance && !spec.minimizer) throw InvalidInput("a target distance needs a known minimizer");

  BaselineReport report;
  Vector x = x0;
  auto distance = [&] { return spec.minimizer ? (x - *spec.minimizer).norm() : 0.0; };
  report.best_distance = distance();
  report.values.push_back(evaluate(spec, x));
  for (int k = 0;; ++k) {
    if (target_distance && distance() <= *target_distance) {
      report.iterations_to_target = k;
      break;
    }
    if (k >= max_iters) break;
    x -= rule.step(k + 1) * subgradient(spec, x);
    report.iterations = k + 1;
    report.values.push_back(evaluate(spec, x));
    report.best_distance = std::min(report.best_distance, distance());
  }
  report.x_final = x;
  report.final_value = report.values.back();
  return report;
}

}  // namespace steklov
