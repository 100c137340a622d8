#include <doctest.h>

#include "steklov/harness/report.hpp"
#include "steklov/solver.hpp"

using namespace steklov;
using doctest::Approx;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

EstimatorConfig closed() {
  EstimatorConfig c;
  c.method = EstimatorMethod::closed_form;
  return c;
}

const AveragingDomain unit = make_domain(DomainShape::cube, 1.0, 1);
const ObjectiveSpec half_square = make_quadratic("half-square", Matrix::Identity(1, 1), Vector::Zero(1));

SolverConfig config(Algorithm algorithm, Vector x0, DomainShape shape = DomainShape::cube) {
  SolverConfig cfg;
  cfg.algorithm = algorithm;
  cfg.x0 = std::move(x0);
  cfg.shape = shape;
  cfg.estimator = closed();
  return cfg;
}

}  // namespace

TEST_CASE("Newton step") {
  const RegularizedSurrogate s(half_square, unit, closed(), scalar(1.0), 0.5);
  CHECK(newton_step(s, scalar(1.0))[0] == Approx(-0.5));
  const RegularizedSurrogate at_min(half_square, unit, closed(), scalar(0.0), 0.5);
  CHECK(newton_step(at_min, scalar(0.0))[0] == 0.0);
  const auto q = make_quadratic("q", Matrix::Identity(3, 3), Vector::Zero(3));
  const Vector x = Vector::LinSpaced(3, -1.0, 2.0);
  const RegularizedSurrogate pure(q, make_domain(DomainShape::ball, 1.0, 3), closed(), x, 0.0);
  CHECK((newton_step(pure, x) + x).norm() < 1e-12);
}

TEST_CASE("line search") {
  const RegularizedSurrogate s(half_square, unit, closed(), scalar(1.0), 0.0);
  auto full = line_search(s, scalar(1.0), scalar(-1.0), 1e-3, 40);
  CHECK(full.l == 0);
  CHECK(full.x_next[0] == 0.0);

  auto overshoot = line_search(s, scalar(1.0), scalar(-100.0), 1e-3, 40);
  CHECK(overshoot.l > 0);
  CHECK(surrogate_value(s, overshoot.x_next) < surrogate_value(s, scalar(1.0)));

  // at the minimizer a tiny step changes both sides only at rounding level
  const RegularizedSurrogate flat(half_square, unit, closed(), scalar(0.0), 0.0);
  CHECK(line_search(flat, scalar(0.0), scalar(1e-9), 1e-3, 40).l == 0);

  // an ascent direction can never satisfy the decrease condition
  CHECK_THROWS_AS(line_search(s, scalar(1.0), scalar(1.0), 1e-3, 5), LineSearchExhausted);
}

TEST_CASE("coherence update of the stationary search") {
  const RadiusSchedule sched{DomainShape::ball, 1, 1.0, 0.5};  // d(D_0) = 2
  // shrinking to d = 1 keeps 3 ||step|| / d below eps: shrink
  CHECK(coherence_update_alg1(sched, 0, 0.01, 0.1) == 1);
  // 3 * 0.1 / 1 = 0.3 >= 0.1 after one shrink: keep the radius
  CHECK(coherence_update_alg1(sched, 0, 0.1, 0.1) == 0);
  CHECK(coherence_update_alg1(sched, 0, 0.0, 0.1) == 1);
  // never below the radius floor
  const int deep = 40;
  CHECK(sched.radius(deep) < 1e-8 * 16);
  CHECK(coherence_update_alg1(sched, deep, 0.0, 0.1) == deep);
}

TEST_CASE("coherence update of the superlinear method") {
  CHECK(coherence_update_alg2(0, 1.0, 1e-3, 1e-2) == 1);
  CHECK(coherence_update_alg2(0, 1.0, 0.1, 1e-2) == 0);
  CHECK(coherence_update_alg2(3, 1.0, 0.0, 1e-2) == 4);
}

TEST_CASE("radius schedule and curvature rule") {
  const RadiusSchedule sched{DomainShape::cube, 4, 2.0, 0.5};
  CHECK(sched.radius(0) == 2.0);
  CHECK(sched.radius(3) == 0.25);
  CHECK(sched.domain(1).radius == 1.0);
  const auto D = make_domain(DomainShape::ball, 0.5, 2);
  CHECK(curvature_constant(CurvatureRule::norm_bound, D, 1.0) == Approx(1.0));
  CHECK(curvature_constant(CurvatureRule::hessian_lipschitz, D, 1.0) == Approx(2.0));
}

TEST_CASE("stationary search on a unit quadratic") {
  const auto q = make_quadratic("q", Matrix::Identity(3, 3), Vector::Zero(3));
  auto cfg = config(Algorithm::stationary, Vector::Ones(3), DomainShape::ball);
  // L bounds the gradient over the whole |x_i| <= 10 box: start wide and keep
  // eps small so the radius waits for the iterates (same as the benchmark)
  cfg.r0 = 10.0;
  cfg.eps0 = 1e-3;
  cfg.max_iters = 1000;
  const auto res = run_stationary_search(q, cfg);
  CHECK(res.stop_reason == StopReason::step_tol);
  CHECK(res.x_final.norm() <= 2.0 * diameter(res.final_domain) + 1e-4);
  CHECK(check_eps_stationarity(res.x_final, res.final_domain, q, 2.0));
}

TEST_CASE("stationary search on |x| from x0 = 5") {
  const auto f = make_abs1d();
  auto cfg = config(Algorithm::stationary, scalar(5.0));
  cfg.r0 = 1.0;
  cfg.radius_shrink = 0.5;
  const auto res = run_stationary_search(f, cfg);
  CHECK(res.stop_reason == StopReason::step_tol);
  CHECK(std::abs(res.x_final[0]) <= res.eps2d_radius);
  CHECK(res.eps2d_radius == Approx(2.0 * diameter(res.final_domain)));
}

TEST_CASE("a start at the minimizer stops at once") {
  const auto q = make_quad(3);
  for (auto alg : {Algorithm::stationary, Algorithm::superlinear}) {
    const auto res = run_solver(q, config(alg, Vector::Zero(3), DomainShape::ball));
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].k == 1);
    CHECK(res.records[0].step_norm < 1e-6);
    CHECK(res.stop_reason == StopReason::step_tol);
  }
}

TEST_CASE("superlinear method on quad dim 5") {
  const auto q = make_quad(5);
  const auto res = run_superlinear(q, config(Algorithm::superlinear, Vector::Ones(5), DomainShape::ball));
  CHECK(res.stop_reason == StopReason::step_tol);
  const auto rate = estimate_rate(res.records);
  REQUIRE(rate.ratios.size() >= 5);
  const auto n = rate.ratios.size();
  for (std::size_t i = n - 4; i < n; ++i) CHECK(rate.ratios[i] < rate.ratios[i - 1]);
  CHECK(rate.superlinear_flag);
}

TEST_CASE("superlinear method on |x| from x0 = 2") {
  const auto res = run_superlinear(make_abs1d(), config(Algorithm::superlinear, scalar(2.0)));
  CHECK(res.stop_reason == StopReason::step_tol);
  CHECK(std::abs(res.x_final[0]) <= res.eps2d_radius);
}

TEST_CASE("superlinear method rejects non-convex objectives") {
  Matrix A = Matrix::Identity(2, 2);
  A(1, 1) = -1.0;
  auto saddle = make_quadratic("saddle", A, Vector::Zero(2));
  CHECK_FALSE(saddle.is_convex);
  CHECK_THROWS_AS(run_superlinear(saddle, config(Algorithm::superlinear, Vector::Ones(2))), InvalidInput);
}

TEST_CASE("records are 1-based and the final step is not applied") {
  const auto res = run_solver(make_l1(2), config(Algorithm::superlinear, Vector::Constant(2, 1.5)));
  REQUIRE(res.records.size() >= 2);
  for (std::size_t i = 0; i < res.records.size(); ++i) CHECK(res.records[i].k == static_cast<int>(i) + 1);
  CHECK(res.x_final == res.records.back().x);
  CHECK(res.records.front().ratio == 0.0);
}

TEST_CASE("eps-stationarity containment") {
  const auto f = make_abs1d();
  const auto D = make_domain(DomainShape::ball, 0.2, 1);
  CHECK(check_eps_stationarity(scalar(0.1), D, f, 1.0));
  CHECK_FALSE(check_eps_stationarity(scalar(0.5), D, f, 1.0));
  CHECK(check_eps_stationarity(scalar(0.35), D, f, 2.0));
  CHECK_FALSE(check_eps_stationarity(scalar(0.35), D, f, 1.0));
}

TEST_CASE("configuration validation") {
  auto cfg = config(Algorithm::superlinear, Vector::Ones(2));
  CHECK_NOTHROW(validate(cfg, 2));
  CHECK_THROWS_AS(validate(cfg, 3), InvalidInput);
  cfg.radius_shrink = 1.0;
  CHECK_THROWS_AS(validate(cfg, 2), InvalidInput);
  cfg = config(Algorithm::superlinear, Vector::Ones(2));
  cfg.r0 = 0.0;
  CHECK_THROWS_AS(validate(cfg, 2), InvalidInput);
  CHECK(parse_algorithm("stationary") == Algorithm::stationary);
  CHECK_THROWS_AS(parse_algorithm("bfgs"), ConfigError);
  CHECK(parse_stop_reason(to_string(StopReason::line_search_exhausted)) == StopReason::line_search_exhausted);
}
