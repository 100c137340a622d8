#pragma once

#include "steklov/common.hpp"
#include "steklov/corpus.hpp"
#include "steklov/domain.hpp"
#include "steklov/model.hpp"
#include "steklov/smoothing.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace steklov {

enum class Algorithm { stationary, superlinear };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// Which constant plays L_s, the bound on the Hessian of the averaged function.
enum class CurvatureRule {
  norm_bound,         // L / d(D_s)
  hessian_lipschitz,  // 2L / d(D_s)^2
};

std::string to_string(CurvatureRule rule);
CurvatureRule parse_curvature_rule(std::string_view name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::superlinear;
  Vector x0;
  DomainShape shape = DomainShape::ball;
  double r0 = 1.0;
  double radius_shrink = 0.5;  // gamma
  double eps0 = 1.0;           // eps_k = eps0 * eps_decay^k
  double eps_decay = 0.9;
  double reg0 = 0.0;  // <= 0 selects L / d(D_0)
  double reg_decay = 0.7;
  double step_tol = 1e-6;
  int max_iters = 500;
  int max_halvings = 40;
  CurvatureRule curvature = CurvatureRule::norm_bound;
  int sample_cap = 4096;  // doubling of the Monte Carlo sample counts stops here (per lane)
  EstimatorConfig estimator;
};

/// Throws InvalidInput on out-of-range fields.
void validate(const SolverConfig& cfg, int dim);

struct IterationRecord {
  int k = 1;
  int s = 0;
  Vector x;
  double surrogate_value = 0.0;  // Phi_s(x_k), the surrogate at its anchor
  double grad_norm = 0.0;
  Vector step;
  double step_norm = 0.0;
  int l = 0;  // halvings taken; -1 when the line search failed
  double radius = 0.0;
  double L_s = 0.0;
  double reg_weight = 0.0;
  double ratio = 0.0;  // step_norm / previous step_norm, 0 for the first record
};

enum class StopReason { step_tol, max_iters, line_search_exhausted };

std::string to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view name);

struct SolverResult {
  Vector x_final;
  std::vector<IterationRecord> records;  // the last record's step is not applied
  StopReason stop_reason = StopReason::max_iters;
  AveragingDomain final_domain;
  double eps2d_radius = 0.0;  // 2 d(D_final)
};

class LineSearchExhausted : public Error {
 public:
  using Error::Error;
};

/// -H^{-1} g for the surrogate's Hessian and gradient at x.
Vector newton_step(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& x);

struct LineSearchResult {
  int l = 0;
  Vector x_next;
  double value_next = 0.0;
};

/// Smallest l in [0, max_halvings] with
///   S(x + 2^-l step) <= S(x) - 4^-l (w/2) ||step||^2;
/// throws LineSearchExhausted if there is none. `value_at_x` skips one
/// surrogate evaluation when the caller already has S(x).
LineSearchResult line_search(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& step, double decrease_weight, int max_halvings,
                             std::optional<double> value_at_x = std::nullopt);

/// Radius index for D_s with radius r0 * gamma^s.
struct RadiusSchedule {
  DomainShape shape = DomainShape::ball;
  int dim = 1;
  double r0 = 1.0;
  double gamma = 0.5;

  double radius(int s) const;
  AveragingDomain domain(int s) const;
};

/// Radii are never shrunk below this value.
inline constexpr double kMinRadius = 1e-8;

/// Shrinks the domain by one gamma factor when 3 ||step|| / d(D_{s+1}) < eps
/// still holds after the shrink; otherwise keeps s.
int coherence_update_alg1(const RadiusSchedule& schedule, int s, double step_norm, double eps);

/// s + 1 when L_s ||step|| <= eps, else s.
int coherence_update_alg2(int s, double L_s, double step_norm, double eps);

/// L_s for D_s under the configured rule.
double curvature_constant(CurvatureRule rule, const AveragingDomain& domain, double lipschitz);

SolverResult run_stationary_search(const ObjectiveSpec& spec, const SolverConfig& cfg);
SolverResult run_superlinear(const ObjectiveSpec& spec, const SolverConfig& cfg);
/// Dispatches on cfg.algorithm.
SolverResult run_solver(const ObjectiveSpec& spec, const SolverConfig& cfg);

/// True iff the known minimizer lies in x + factor * D.
bool check_eps_stationarity(const Eigen::Ref<const Vector>& x, const AveragingDomain& domain,
                            const ObjectiveSpec& spec, double factor);

}  // namespace steklov
