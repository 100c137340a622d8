#include <doctest.h>

#include "oracles.hpp"
#include "steklov/smoothing.hpp"

#include <Eigen/Eigenvalues>

using namespace steklov;
using doctest::Approx;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

EstimatorConfig quadrature(int points, double fd = 0.1) {
  EstimatorConfig q;
  q.method = EstimatorMethod::quadrature;
  q.quadrature_points_per_axis = points;
  q.fd_step_factor = fd;
  return q;
}

EstimatorConfig sampling(int n = 2048) {
  EstimatorConfig m;
  m.outer_samples = m.inner_samples = n;
  return m;
}

EstimatorConfig closed() {
  EstimatorConfig c;
  c.method = EstimatorMethod::closed_form;
  return c;
}

const AveragingDomain unit = make_domain(DomainShape::cube, 1.0, 1);

}  // namespace

TEST_CASE("constants are reproduced exactly") {
  for (auto shape : {DomainShape::ball, DomainShape::cube}) {
    const auto f = make_constant(2, 3.25);
    const auto D = make_domain(shape, 0.5, 2);
    const Vector x = vec({0.3, -4.0});
    for (const auto& cfg : {sampling(256), quadrature(16), closed()}) {
      CAPTURE(to_string(cfg.method));
      CHECK(single_average_value(f, D, x, cfg).payload == Approx(3.25).epsilon(1e-12));
      CHECK(double_average_value(f, D, x, cfg).payload == Approx(3.25).epsilon(1e-12));
      CHECK(double_average_gradient(f, D, x, cfg).payload.norm() == 0.0);
    }
    CHECK(single_average_value(f, D, x, sampling(256)).payload == 3.25);
  }
}

TEST_CASE("affine functions survive averaging") {
  const auto f = make_affine(vec({1.5, -2.0}), 0.25);
  const Vector x = vec({0.4, 1.1});
  const double exact = 1.5 * 0.4 - 2.0 * 1.1 + 0.25;
  for (auto shape : {DomainShape::ball, DomainShape::cube}) {
    const auto D = make_domain(shape, 1.0, 2);
    const auto m = single_average_value(f, D, x, sampling());
    CHECK(std::abs(m.payload - exact) <= 3.0 * m.stderr_estimate + 1e-12);
    const auto mm = double_average_value(f, D, x, sampling());
    CHECK(std::abs(mm.payload - exact) <= 3.0 * mm.stderr_estimate + 1e-12);
    CHECK(single_average_value(f, D, x, quadrature(40)).payload == Approx(exact).epsilon(1e-10));
    CHECK(double_average_value(f, D, x, quadrature(40)).payload == Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("single average of |x|") {
  const auto f = make_abs1d();
  CHECK(single_average_value(f, unit, vec({0.0}), quadrature(100000)).payload == Approx(0.5).epsilon(1e-9));
  const auto m = single_average_value(f, unit, vec({0.0}), sampling(1 << 14));
  CHECK(std::abs(m.payload - 0.5) <= 3.0 * m.stderr_estimate);

  const auto g0 = single_average_gradient(f, unit, vec({0.0}), sampling(1 << 14));
  CHECK(std::abs(g0.payload[0]) <= 3.0 * g0.stderr_estimate);
  // FD of the quadrature value as the oracle for the slope at 0.5
  const auto val = [&](double t) { return single_average_value(f, unit, vec({t}), quadrature(200000)).payload; };
  const double fd = oracle::central_diff(val, 0.5, 1e-3);
  CHECK(fd == Approx(0.5).epsilon(1e-4));
  CHECK(single_average_gradient(f, unit, vec({0.5}), quadrature(200000)).payload[0] == Approx(fd).epsilon(1e-4));
}

TEST_CASE("averaged gradients of a quadratic equal A x") {
  const auto q = make_quad(3);
  const Vector x = vec({1.0, -0.5, 2.0});
  const Vector Ax = q.quadratic->A * x;
  for (auto shape : {DomainShape::ball, DomainShape::cube}) {
    const auto D = make_domain(shape, 1.0, 3);
    const auto g1 = single_average_gradient(q, D, x, sampling());
    const auto g2 = double_average_gradient(q, D, x, sampling());
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(g1.payload[i] - Ax[i]) <= 3.0 * g1.stderr_entries[i] + 1e-12);
      CHECK(std::abs(g2.payload[i] - Ax[i]) <= 3.0 * g2.stderr_entries[i] + 1e-12);
    }
    const auto H = double_average_hessian(q, D, x, quadrature(12));
    CHECK((H.payload - q.quadratic->A).norm() <= 1e-4 * q.quadratic->A.norm());
    const auto Hm = double_average_hessian(q, D, x, sampling(512));
    CHECK((Hm.payload - q.quadratic->A).norm() <= 1e-4 * q.quadratic->A.norm());
  }
}

TEST_CASE("double average of |x|") {
  const auto f = make_abs1d();
  const auto q = quadrature(1 << 14, 1.0 / 4096);
  CHECK(double_average_value(f, unit, vec({0.0}), q).payload == Approx(2.0 / 3.0).epsilon(1e-6));
  const auto m = double_average_gradient(f, unit, vec({0.0}), sampling(1 << 12));
  CHECK(std::abs(m.payload[0]) <= 3.0 * m.stderr_estimate);
  // Phi'(0.25) = (4r|x| - x^2)/(4r^2) = 0.234375, checked against FD of the quadrature value
  const auto val = [&](double t) { return double_average_value(f, unit, vec({t}), quadrature(4000)).payload; };
  CHECK(oracle::central_diff(val, 0.25, 1e-3) == Approx(0.234375).epsilon(1e-4));
  CHECK(double_average_gradient(f, unit, vec({0.25}), q).payload[0] == Approx(0.234375).epsilon(1e-6));
  CHECK(double_average_gradient(f, unit, vec({0.25}), closed()).payload[0] == Approx(0.234375));
}

TEST_CASE("double-average Hessian of |x| at the kink") {
  const auto f = make_abs1d();
  const auto H = double_average_hessian(f, unit, vec({0.0}), quadrature(1 << 14, 1e-3));
  CHECK(std::abs(H.payload(0, 0) - 1.0) <= 1e-3);
  // second differences of the oracle value as the reference
  const auto Phi = [](double t) { return oracle::abs_double_value(t, 1.0); };
  CHECK(oracle::second_diff(Phi, 0.0, 1e-4) == Approx(1.0).epsilon(1e-4));
  // default step straddles the kink of the curvature: 1 - c/4
  CHECK(double_average_hessian(f, unit, vec({0.0}), quadrature(1 << 12)).payload(0, 0) == Approx(0.975).epsilon(1e-3));
  CHECK_THROWS_AS(double_average_hessian(f, make_domain(DomainShape::cube, 1e-9, 1), vec({0.0}), sampling(16)),
                  DegenerateDomain);
}

TEST_CASE("convex specs have positive semidefinite averaged Hessians") {
  for (const auto& spec : list_corpus()) {
    if (!spec.is_convex) continue;
    CAPTURE(spec.name);
    const auto D = make_domain(DomainShape::ball, 1.0, spec.dim);
    const double Ls = gradient_norm_bound_constant(D, spec.lipschitz_const);
    for (int i = 0; i < 5; ++i) {
      const Vector x = *spec.minimizer + Vector::LinSpaced(spec.dim, -0.4 * i, 0.3 * i);
      const auto H = double_average_hessian(spec, D, x, sampling(256));
      CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(H.payload).eigenvalues().minCoeff() >= -1e-6 * Ls);
    }
  }
}

TEST_CASE("separable sampling path equals the generic loop") {
  for (int dim : {1, 3}) {
    const auto fast = dim == 1 ? make_abs1d() : make_huberized_l1(dim, 0.5);
    auto slow = fast;
    slow.separable_profile.reset();
    const auto D = make_domain(DomainShape::cube, 0.6, dim);
    const Vector x = Vector::LinSpaced(dim, -0.3, 0.5);
    const auto cfg = sampling(200);
    const auto a = double_average_jet(fast, D, x, cfg, true);
    const auto b = double_average_jet(slow, D, x, cfg, true);
    CHECK(a.value.payload == Approx(b.value.payload).epsilon(1e-12));
    CHECK(a.value.stderr_estimate == Approx(b.value.stderr_estimate).epsilon(1e-9));
    CHECK((a.gradient.payload - b.gradient.payload).norm() <= 1e-12);
    CHECK((a.gradient.stderr_entries - b.gradient.stderr_entries).norm() <= 1e-9);
    CHECK((a.hessian->payload - b.hessian->payload).norm() <= 1e-9);
    const auto sa = single_average_gradient(fast, D, x, cfg), sb = single_average_gradient(slow, D, x, cfg);
    CHECK((sa.payload - sb.payload).norm() <= 1e-12);
  }
}

TEST_CASE("separable quadrature path equals the product lattice") {
  const auto fast = make_l1(2);
  auto slow = fast;
  slow.separable_profile.reset();
  const auto D = make_domain(DomainShape::cube, 1.0, 2);
  const auto q = quadrature(40, 0.05);
  for (const Vector& x : {vec({0.0, 0.3}), vec({-0.77, 1.9})}) {
    const auto a = double_average_jet(fast, D, x, q, true);
    const auto b = double_average_jet(slow, D, x, q, true);
    CHECK(a.value.payload == Approx(b.value.payload).epsilon(1e-12));
    CHECK((a.gradient.payload - b.gradient.payload).norm() <= 1e-12);
    CHECK((a.hessian->payload - b.hessian->payload).norm() <= 1e-10);
  }
}

TEST_CASE("sample keys give common random numbers") {
  const auto f = make_linf(2);
  const auto D = make_domain(DomainShape::ball, 1.0, 2);
  const auto cfg = sampling(64);
  const Vector x = vec({0.2, 0.1});
  CHECK(double_average_value(f, D, x, cfg, 9).payload == double_average_value(f, D, x, cfg, 9).payload);
  CHECK(double_average_value(f, D, x, cfg, 9).payload != double_average_value(f, D, x, cfg, 10).payload);
  CHECK(double_average_value(f, D, x, cfg).payload == double_average_value(f, D, x, cfg).payload);
}

TEST_CASE("estimator errors") {
  const auto f = make_l1(5);
  const auto D = make_domain(DomainShape::cube, 1.0, 5);
  CHECK_THROWS_AS(single_average_value(make_quad(5), D, Vector::Zero(5), quadrature(4)), CapabilityError);
  CHECK_THROWS_AS(single_average_value(make_linf(2), make_domain(DomainShape::cube, 1.0, 2), Vector::Zero(2), closed()),
                  CapabilityError);
  CHECK_THROWS_AS(single_average_value(f, D, Vector::Zero(3), sampling(8)), InvalidInput);
  EstimatorConfig bad = sampling(8);
  bad.inner_samples = 0;
  CHECK_THROWS(single_average_value(f, D, Vector::Zero(5), bad));
  CHECK(parse_estimator_method("quadrature") == EstimatorMethod::quadrature);
  CHECK_THROWS(parse_estimator_method("exact"));
}
