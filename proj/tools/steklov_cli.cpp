// steklov: run the smoothed Newton solvers, the property suite, or list the corpus.

#include "steklov/harness/property_suite.hpp"
#include "steklov/harness/run_spec.hpp"
#include "steklov/harness/runner.hpp"
#include "steklov/sampling.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitSolverFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSuiteFailure = 3;

struct RunFlags {
  std::string config;
  std::optional<std::string> problem, algorithm, x0, estimator, shape, curvature, trace, summary;
  std::optional<int> dim, samples_outer, samples_inner, max_iters, quad_points, max_halvings;
  std::optional<double> r0, shrink, eps0, eps_decay, reg0, reg_decay, tol, fd_step, baseline_a0;
  std::optional<std::uint64_t> seed;
  bool baseline = false;
  bool wall_time = false;
};

steklov::RunSpec resolve(const RunFlags& f) {
  using namespace steklov;
  RunSpec spec = f.config.empty() ? default_run_spec() : load_run_spec(f.config);
  SolverConfig& s = spec.solver;
  if (f.problem) spec.problem = *f.problem;
  if (f.dim) spec.dim = *f.dim;
  if (f.algorithm) s.algorithm = parse_algorithm(*f.algorithm);
  if (f.x0) s.x0 = parse_csv_vector(*f.x0);
  if (f.shape) s.shape = parse_domain_shape(*f.shape);
  if (f.curvature) s.curvature = parse_curvature_rule(*f.curvature);
  if (f.r0) s.r0 = *f.r0;
  if (f.shrink) s.radius_shrink = *f.shrink;
  if (f.eps0) s.eps0 = *f.eps0;
  if (f.eps_decay) s.eps_decay = *f.eps_decay;
  if (f.reg0) s.reg0 = *f.reg0;
  if (f.reg_decay) s.reg_decay = *f.reg_decay;
  if (f.tol) s.step_tol = *f.tol;
  if (f.max_iters) s.max_iters = *f.max_iters;
  if (f.max_halvings) s.max_halvings = *f.max_halvings;
  if (f.estimator) s.estimator.method = parse_estimator_method(*f.estimator);
  if (f.samples_outer) s.estimator.outer_samples = *f.samples_outer;
  if (f.samples_inner) s.estimator.inner_samples = *f.samples_inner;
  if (f.quad_points) s.estimator.quadrature_points_per_axis = *f.quad_points;
  if (f.fd_step) s.estimator.fd_step_factor = *f.fd_step;
  if (f.seed) s.estimator.seed = *f.seed;
  if (f.trace) spec.trace_path = *f.trace;
  if (f.summary) spec.summary_path = *f.summary;
  if (f.baseline) spec.baseline = true;
  if (f.baseline_a0) spec.baseline_a0 = *f.baseline_a0;
  if (f.wall_time) spec.record_wall_time = true;
  return spec;
}

int run_command(const RunFlags& flags) {
  using namespace steklov;
  RunSpec spec;
  try {
    spec = resolve(flags);
    // Surface configuration problems before any work is done.
    const ObjectiveSpec objective = make_objective(spec.problem, spec.dim);
    SolverConfig cfg = spec.solver;
    cfg.x0 = resolved_x0(spec);
    validate(cfg, objective.dim);
    if (cfg.estimator.method == EstimatorMethod::closed_form &&
        !supports_closed_form(objective, make_domain(cfg.shape, cfg.r0, objective.dim))) {
      throw ConfigError("no closed-form smoothing for '" + spec.problem + "' on a " + to_string(cfg.shape) +
                        " domain; choose --estimator quadrature or monte_carlo");
    }
    if (cfg.estimator.method == EstimatorMethod::quadrature && objective.dim > kMaxQuadratureDim) {
      throw ConfigError("quadrature is limited to dimension <= 4");
    }
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    const RunOutcome out = run_from_spec(spec);
    const ReportSummary& s = out.summary;
    std::printf("%s dim=%d %s: %s after %d iterations, |x - x*| = %.3g, eps2d radius %.3g (%s)\n", s.problem.c_str(),
                s.dim, s.algorithm.c_str(), s.stop_reason.c_str(), s.iterations, s.distance_to_known_minimizer,
                s.eps2d_radius, s.eps2d_satisfied ? "satisfied" : "not satisfied");
    if (s.baseline_iterations) std::printf("baseline subgradient descent: %d iterations\n", *s.baseline_iterations);
    return out.result.stop_reason == StopReason::step_tol ? 0 : kExitSolverFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

int suite_command(const std::optional<std::string>& filter) {
  using namespace steklov;
  SuiteReport report;
  try {
    report = run_property_suite({filter, std::nullopt});
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  for (const auto& c : report.checks) {
    const char* tag = c.passed ? "PASS" : (c.gating ? "FAIL" : "NOTE");
    std::printf("%s  [%s] %s%s%s\n", tag, c.module.c_str(), c.name.c_str(), c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
  }
  const bool ok = report.all_passed();
  std::printf("%s\n", ok ? "suite passed" : "suite FAILED");
  return ok ? 0 : kExitSuiteFailure;
}

int corpus_list() {
  for (const auto& e : steklov::corpus_entries()) {
    std::printf("%-14s dims %d..%-3d default %-3d %s\n", e.name.c_str(), e.min_dim, e.max_dim, e.default_dim,
                e.description.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-averaging smoothing and regularized Newton methods for nonsmooth convex problems"};
  app.require_subcommand(1);

  RunFlags f;
  auto* run = app.add_subcommand("run", "solve one problem and write the trace/summary");
  run->add_option("--config", f.config, "JSON run spec; flags override its values");
  run->add_option("--problem", f.problem, "corpus entry name");
  run->add_option("--dim", f.dim, "problem dimension");
  run->add_option("--algorithm", f.algorithm, "stationary|superlinear");
  run->add_option("--x0", f.x0, "comma-separated starting point (default all ones)");
  run->add_option("--shape", f.shape, "averaging domain: ball|cube");
  run->add_option("--curvature", f.curvature, "L_s rule: norm_bound (L/d) | hessian_lipschitz (2L/d^2)");
  run->add_option("--r0", f.r0, "initial radius");
  run->add_option("--shrink", f.shrink, "radius shrink factor gamma");
  run->add_option("--eps0", f.eps0, "first coherence threshold");
  run->add_option("--eps-decay", f.eps_decay, "threshold decay rho");
  run->add_option("--reg0", f.reg0, "initial regularization (<= 0: L/d(D_0))");
  run->add_option("--reg-decay", f.reg_decay, "regularization decay tau");
  run->add_option("--samples-outer", f.samples_outer, "outer Monte Carlo samples N");
  run->add_option("--samples-inner", f.samples_inner, "inner Monte Carlo samples M");
  run->add_option("--quad-points", f.quad_points, "quadrature points per axis");
  run->add_option("--fd-step", f.fd_step, "Hessian difference step as a fraction of the radius");
  run->add_option("--estimator", f.estimator, "closed_form|quadrature|monte_carlo");
  run->add_option("--seed", f.seed, "random seed");
  run->add_option("--tol", f.tol, "stop when the Newton step is shorter than this");
  run->add_option("--max-iters", f.max_iters, "iteration cap");
  run->add_option("--max-halvings", f.max_halvings, "line-search halving cap");
  run->add_option("--trace", f.trace, "CSV trace path");
  run->add_option("--summary", f.summary, "JSON summary path");
  run->add_flag("--baseline", f.baseline, "also run subgradient descent with a0/k steps");
  run->add_option("--baseline-a0", f.baseline_a0, "baseline step constant a0");
  run->add_flag("--wall-time", f.wall_time, "record wall time in the summary (breaks byte-identical output)");

  std::optional<std::string> filter;
  auto* suite = app.add_subcommand("suite", "run the property checks");
  suite->add_option("--filter", filter, "only this module: corpus|smoothing|model|solver|harness");

  auto* corpus = app.add_subcommand("corpus", "corpus commands");
  corpus->require_subcommand(1);
  auto* list = corpus->add_subcommand("list", "list the shipped problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (run->parsed()) return run_command(f);
  if (suite->parsed()) return suite_command(filter);
  if (list->parsed()) return corpus_list();
  return kExitConfigError;
}
