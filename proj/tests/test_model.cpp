#include <doctest.h>

#include "oracles.hpp"
#include "steklov/model.hpp"

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

}  // namespace

TEST_CASE("surrogate at its anchor is the smoothed function") {
  const auto f = make_abs1d();
  const RegularizedSurrogate s(f, unit, closed(), scalar(0.3), 2.0);
  CHECK(surrogate_value(s, scalar(0.3)) == Approx(oracle::abs_double_value(0.3, 1.0)));
  CHECK(surrogate_gradient(s, scalar(0.3))[0] == Approx(oracle::abs_double_slope(0.3, 1.0)));
  const RegularizedSurrogate flat(f, unit, closed(), scalar(0.0), 0.0);
  CHECK(surrogate_value(flat, scalar(0.9)) == Approx(oracle::abs_double_value(0.9, 1.0)));
}

TEST_CASE("surrogate value of a 1D quadratic") {
  // x^2/2 twice averaged over [-1, 1] is x^2/2 + 1/3
  const auto q = make_quadratic("q", Matrix::Identity(1, 1), Vector::Zero(1));
  const RegularizedSurrogate s(q, unit, closed(), scalar(0.0), 0.5);
  const auto half_square = [](double t) { return 0.5 * t * t; };
  const double oracle_phi = oracle::midpoint_double(half_square, 1.0, 1.0, 2000);
  CHECK(oracle_phi == Approx(0.5 + 1.0 / 3.0).epsilon(1e-6));
  CHECK(surrogate_value(s, scalar(1.0)) == Approx(oracle_phi + 0.5).epsilon(1e-6));
}

TEST_CASE("surrogate gradient adds the regularizer pull") {
  const auto f = make_abs1d();
  const RegularizedSurrogate s(f, unit, closed(), scalar(0.0), 1.0);
  CHECK(surrogate_gradient(s, scalar(0.5))[0] == Approx(0.4375 + 1.0));
}

TEST_CASE("surrogate Hessian") {
  const auto q = make_quadratic("q", Matrix::Identity(2, 2), Vector::Zero(2));
  const auto D = make_domain(DomainShape::ball, 1.0, 2);
  const RegularizedSurrogate s(q, D, closed(), Vector::Zero(2), 0.5);
  CHECK((surrogate_hessian(s, Vector::Ones(2)) - 2.0 * Matrix::Identity(2, 2)).norm() < 1e-12);

  EstimatorConfig quad;
  quad.method = EstimatorMethod::quadrature;
  quad.quadrature_points_per_axis = 1 << 14;
  quad.fd_step_factor = 1e-3;
  const auto f = make_abs1d();
  const RegularizedSurrogate a(f, unit, quad, scalar(0.0), 1.0);
  CHECK(std::abs(surrogate_hessian(a, scalar(0.0))(0, 0) - 3.0) <= 1e-2);
}

TEST_CASE("jet agrees with the separate evaluations") {
  const auto f = make_linf(2);
  EstimatorConfig mc;
  mc.outer_samples = mc.inner_samples = 128;
  const auto D = make_domain(DomainShape::ball, 0.5, 2);
  const RegularizedSurrogate s(f, D, mc, Vector::Constant(2, 0.1), 0.7);
  const Vector y = Vector::Constant(2, 0.3);
  const auto j = s.jet(y);
  CHECK(j.value == surrogate_value(s, y));
  CHECK(j.gradient == surrogate_gradient(s, y));
  CHECK(j.hessian == surrogate_hessian(s, y));
}

TEST_CASE("sandwich check") {
  const auto D = make_domain(DomainShape::ball, 1.0, 2);
  const double Ls = gradient_norm_bound_constant(D, 1.0);
  const auto q = make_quadratic("q", Ls * Matrix::Identity(2, 2), Vector::Zero(2));
  const RegularizedSurrogate s(q, D, closed(), Vector::Zero(2), Ls);
  const auto rep = check_hessian_sandwich(s, Vector::Ones(2), Ls);
  CHECK(rep.eig_min == Approx(3.0 * Ls));
  CHECK(rep.eig_max == Approx(3.0 * Ls));
  CHECK(rep.upper_ok);
  CHECK(rep.lower_ok);

  const auto zero = make_constant(2, 0.0);
  const RegularizedSurrogate z(zero, D, closed(), Vector::Zero(2), Ls);
  const auto rz = check_hessian_sandwich(z, Vector::Ones(2), Ls);
  CHECK(rz.eig_min == Approx(2.0 * Ls));
  CHECK(rz.lower_ok);
  CHECK(rz.upper_ok);
  CHECK(rz.regularizer_floor_ok);
}

TEST_CASE("surrogate input checks") {
  const auto f = make_l1(2);
  const auto D = make_domain(DomainShape::cube, 1.0, 2);
  CHECK_THROWS_AS(RegularizedSurrogate(f, D, closed(), Vector::Zero(2), -1.0), InvalidInput);
  CHECK_THROWS_AS(RegularizedSurrogate(f, D, closed(), Vector::Zero(3), 1.0), InvalidInput);
  const RegularizedSurrogate s(f, D, closed(), Vector::Zero(2), 1.0);
  CHECK_THROWS_AS(s.value(Vector::Zero(1)), InvalidInput);
}

TEST_CASE("SPD solve") {
  Matrix H(2, 2);
  H << 4.0, 1.0, 1.0, 3.0;
  const Vector b = Vector::Ones(2);
  CHECK((H * solve_spd(H, b) - b).norm() < 1e-12);
  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(solve_spd(bad, b), IndefiniteHessian);
}
