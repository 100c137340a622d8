#pragma once

#include "steklov/corpus.hpp"

#include <optional>

namespace steklov {

enum class StepRuleKind { harmonic, constant };

/// a_k = a0 / k (harmonic) or a_k = a0 (constant).
struct StepRule {
  StepRuleKind kind = StepRuleKind::harmonic;
  double a0 = 1.0;

  double step(int k) const { return kind == StepRuleKind::harmonic ? a0 / k : a0; }
};

struct BaselineReport {
  Vector x_final;
  int iterations = 0;                       // updates performed
  std::optional<int> iterations_to_target;  // first k with ||x_k - x*|| <= target
  double best_distance = 0.0;
  double final_value = 0.0;
  std::vector<double> values;  // f(x_k), k = 0..iterations
};

/// Subgradient descent x_{k+1} = x_k - a_k g(x_k). Stops once the target
/// distance is reached (when given) or after max_iters updates.
BaselineReport run_baseline_subgradient(const ObjectiveSpec& spec, const Eigen::Ref<const Vector>& x0,
                                        const StepRule& rule, int max_iters,
                                        std::optional<double> target_distance = std::nullopt);

}  // namespace steklov
