#include "steklov/solver.hpp"

#include <algorithm>
#include <cmath>

namespace steklov {

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::stationary ? "stationary" : "superlinear";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "stationary") return Algorithm::stationary;
  if (name == "superlinear") return Algorithm::superlinear;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (stationary|superlinear)");
}

std::string to_string(CurvatureRule rule) {
  return rule == CurvatureRule::norm_bound ? "norm_bound" : "hessian_lipschitz";
}

CurvatureRule parse_curvature_rule(std::string_view name) {
  if (name == "norm_bound") return CurvatureRule::norm_bound;
  if (name == "hessian_lipschitz") return CurvatureRule::hessian_lipschitz;
  throw ConfigError("unknown curvature rule '" + std::string(name) + "' (norm_bound|hessian_lipschitz)");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::step_tol:
      return "step_tol";
    case StopReason::max_iters:
      return "max_iters";
    case StopReason::line_search_exhausted:
      break;
  }
  return "line_search_exhausted";
}

StopReason parse_stop_reason(std::string_view name) {
  if (name == "step_tol") return StopReason::step_tol;
  if (name == "max_iters") return StopReason::max_iters;
  if (name == "line_search_exhausted") return StopReason::line_search_exhausted;
  throw ConfigError("unknown stop reason '" + std::string(name) + "'");
}

void validate(const SolverConfig& cfg, int dim) {
  require_dim(cfg.x0.size(), dim, "x0");
  if (!cfg.x0.allFinite()) throw InvalidInput("x0 must be finite");
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!(cfg.r0 > 0.0) || !std::isfinite(cfg.r0)) throw InvalidInput("r0 must be positive");
  if (!in_unit(cfg.radius_shrink)) throw InvalidInput("radius shrink must lie in (0,1)");
  if (!(cfg.eps0 > 0.0)) throw InvalidInput("eps0 must be positive");
  if (!in_unit(cfg.eps_decay)) throw InvalidInput("eps decay must lie in (0,1)");
  if (!std::isfinite(cfg.reg0)) throw InvalidInput("reg0 must be finite");
  if (!in_unit(cfg.reg_decay)) throw InvalidInput("reg decay must lie in (0,1)");
  if (!(cfg.step_tol > 0.0)) throw InvalidInput("step tolerance must be positive");
  if (cfg.max_iters < 1) throw InvalidInput("max_iters must be positive");
  if (cfg.max_halvings < 0) throw InvalidInput("max_halvings must be non-negative");
  if (cfg.sample_cap < 1) throw InvalidInput("sample cap must be positive");
  validate(cfg.estimator);
}

Vector newton_step(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& x) {
  const RegularizedSurrogate::Jet jet = s.jet(x);
  return solve_spd(jet.hessian, -jet.gradient);
}

LineSearchResult line_search(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& step, double decrease_weight, int max_halvings,
                             std::optional<double> value_at_x) {
  const double base = value_at_x ? *value_at_x : s.value(x);
  const double margin = 0.5 * decrease_weight * step.squaredNorm();
  double scale = 1.0;
  for (int l = 0; l <= max_halvings; ++l) {
    Vector trial = x + scale * step;
    const double v = s.value(trial);
    if (v <= base - scale * scale * margin) return {l, std::move(trial), v};
    scale *= 0.5;
  }
  throw LineSearchExhausted("no step length 2^-l with l <= " + std::to_string(max_halvings) +
                            " gives the required decrease");
}

double RadiusSchedule::radius(int s) const { return std::max(r0 * std::pow(gamma, s), kMinRadius); }

AveragingDomain RadiusSchedule::domain(int s) const { return make_domain(shape, radius(s), dim); }

int coherence_update_alg1(const RadiusSchedule& schedule, int s, double step_norm, double eps) {
  if (schedule.r0 * std::pow(schedule.gamma, s + 1) < kMinRadius) return s;
  const double d_next = diameter(schedule.domain(s + 1));
  return 3.0 * step_norm / d_next < eps ? s + 1 : s;
}

int coherence_update_alg2(int s, double L_s, double step_norm, double eps) {
  return L_s * step_norm <= eps ? s + 1 : s;
}

double curvature_constant(CurvatureRule rule, const AveragingDomain& domain, double lipschitz) {
  return rule == CurvatureRule::norm_bound ? gradient_norm_bound_constant(domain, lipschitz)
                                           : hessian_lipschitz_constant(domain, lipschitz);
}

namespace {

struct Newton {
  RegularizedSurrogate surrogate;
  RegularizedSurrogate::Jet jet;
  Vector step;
};

Newton newton_at(const ObjectiveSpec& spec, const AveragingDomain& domain, const EstimatorConfig& est,
                 const Vector& x, double reg_weight) {
  RegularizedSurrogate surrogate(spec, domain, est, x, reg_weight);
  RegularizedSurrogate::Jet jet = surrogate.jet(x);
  Vector step = solve_spd(jet.hessian, -jet.gradient);
  return {std::move(surrogate), std::move(jet), std::move(step)};
}

void double_budget(EstimatorConfig& est, int cap) {
  if (est.method != EstimatorMethod::monte_carlo) return;
  // Doubles up to the cap; budgets configured above the cap stay as they are.
  est.outer_samples = std::max(est.outer_samples, std::min(2 * est.outer_samples, cap));
  est.inner_samples = std::max(est.inner_samples, std::min(2 * est.inner_samples, cap));
}

SolverResult run(const ObjectiveSpec& spec, const SolverConfig& cfg, Algorithm algorithm) {
  validate(cfg, spec.dim);
  if (algorithm == Algorithm::superlinear && !spec.is_convex) {
    throw InvalidInput("the superlinear method requires a convex objective ('" + spec.name + "' is not)");
  }
  const RadiusSchedule schedule{cfg.shape, spec.dim, cfg.r0, cfg.radius_shrink};
  const double L = spec.lipschitz_const;
  EstimatorConfig est = cfg.estimator;

  int s = 0;
  AveragingDomain domain = schedule.domain(s);
  const double reg0 = cfg.reg0 > 0.0 ? cfg.reg0 : gradient_norm_bound_constant(domain, L);
  double reg = reg0;
  int rises = 0;  // consecutive increases of the step ratio

  SolverResult result;
  Vector x = cfg.x0;
  double prev_step_norm = 0.0;
  double prev_ratio = 0.0;
  for (int k = 1;; ++k) {
    const double eps = cfg.eps0 * std::pow(cfg.eps_decay, k - 1);
    double L_s = curvature_constant(cfg.curvature, domain, L);
    const double lambda = algorithm == Algorithm::stationary ? L_s : reg;
    Newton nt = newton_at(spec, domain, est, x, lambda);

    if (algorithm == Algorithm::superlinear && k > 1 && coherence_update_alg2(s, L_s, nt.step.norm(), eps) != s) {
      ++s;
      domain = schedule.domain(s);
      L_s = curvature_constant(cfg.curvature, domain, L);
      double_budget(est, cfg.sample_cap);
      nt = newton_at(spec, domain, est, x, lambda);
    }

    IterationRecord rec;
    rec.k = k;
    rec.s = s;
    rec.x = x;
    rec.surrogate_value = nt.jet.value;
    rec.grad_norm = nt.jet.gradient.norm();
    rec.step = nt.step;
    rec.step_norm = nt.step.norm();
    rec.radius = domain.radius;
    rec.L_s = L_s;
    rec.reg_weight = lambda;
    rec.ratio = k == 1 ? 0.0 : (prev_step_norm > 0.0 ? rec.step_norm / prev_step_norm : 0.0);
    result.records.push_back(rec);

    if (rec.step_norm < cfg.step_tol) {
      result.stop_reason = StopReason::step_tol;
      break;
    }
    if (k >= cfg.max_iters) {
      result.stop_reason = StopReason::max_iters;
      break;
    }
    try {
      LineSearchResult ls = line_search(nt.surrogate, x, nt.step, lambda, cfg.max_halvings, nt.jet.value);
      result.records.back().l = ls.l;
      x = std::move(ls.x_next);
    } catch (const LineSearchExhausted&) {
      result.records.back().l = -1;
      result.stop_reason = StopReason::line_search_exhausted;
      break;
    }

    if (algorithm == Algorithm::stationary) {
      const int next = coherence_update_alg1(schedule, s, rec.step_norm, eps);
      if (next != s) {
        s = next;
        domain = schedule.domain(s);
        double_budget(est, cfg.sample_cap);
      }
    } else {
      // Pause the decay while the step ratio keeps rising.
      if (k > 2 && rec.ratio > prev_ratio) {
        ++rises;
      } else {
        rises = 0;
      }
      if (rises < 3) reg *= cfg.reg_decay;
    }
    prev_ratio = rec.ratio;
    prev_step_norm = rec.step_norm;
  }

  result.x_final = result.records.back().x;
  result.final_domain = domain;
  result.eps2d_radius = 2.0 * diameter(domain);
  return result;
}

}  // namespace

SolverResult run_stationary_search(const ObjectiveSpec& spec, const SolverConfig& cfg) {
  return run(spec, cfg, Algorithm::stationary);
}

SolverResult run_superlinear(const ObjectiveSpec& spec, const SolverConfig& cfg) {
  return run(spec, cfg, Algorithm::superlinear);
}

SolverResult run_solver(const ObjectiveSpec& spec, const SolverConfig& cfg) {
  return cfg.algorithm == Algorithm::stationary ? run_stationary_search(spec, cfg) : run_superlinear(spec, cfg);
}

bool check_eps_stationarity(const Eigen::Ref<const Vector>& x, const AveragingDomain& domain,
                            const ObjectiveSpec& spec, double factor) {
  if (!spec.minimizer) throw InvalidInput("'" + spec.name + "' has no known minimizer");
  require_dim(x.size(), spec.dim, "stationarity check");
  return contains(domain, *spec.minimizer - x, factor);
}

}  // namespace steklov
