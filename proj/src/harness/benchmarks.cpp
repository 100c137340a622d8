#include "steklov/harness/benchmarks.hpp"

namespace steklov {

namespace {

RunSpec make_run(const std::string& problem, int dim, Algorithm algorithm, double start) {
  RunSpec spec = default_run_spec();
  spec.problem = problem;
  spec.dim = dim;
  spec.solver.algorithm = algorithm;
  spec.solver.x0 = Vector::Constant(dim, start);
  spec.solver.shape = DomainShape::cube;
  return spec;
}

}  // namespace

std::vector<RunSpec> convergence_benchmark() {
  std::vector<RunSpec> runs;
  for (Algorithm algorithm : {Algorithm::stationary, Algorithm::superlinear}) {
    for (int dim : {2, 5, 10}) {
      RunSpec spec = make_run("quad", dim, algorithm, 1.0);
      if (algorithm == Algorithm::stationary) {
        // L is the gradient bound over the whole |x_i| <= 10 box, so L/d(D_0)
        // at r0 = 1 over-regularizes; a wide first domain and a small eps0
        // keep the radius from shrinking before the iterates settle.
        spec.solver.shape = DomainShape::ball;
        spec.solver.r0 = 10.0;
        spec.solver.eps0 = 1e-3;
        spec.solver.max_iters = 1000;
      }
      runs.push_back(spec);
    }
    runs.push_back(make_run("abs1d", 1, algorithm, algorithm == Algorithm::stationary ? 5.0 : 2.0));
    for (int dim : {2, 5}) runs.push_back(make_run("l1", dim, algorithm, 1.0));
    runs.push_back(make_run("maxlin", 1, algorithm, 1.0));
    RunSpec linf = make_run("linf", 2, algorithm, 1.0);
    linf.solver.x0 << 1.0, -0.5;
    linf.solver.estimator.method = EstimatorMethod::quadrature;
    runs.push_back(linf);
  }
  return runs;
}

}  // namespace steklov
