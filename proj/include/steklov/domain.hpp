#pragma once

#include "steklov/common.hpp"

#include <string>
#include <string_view>

namespace steklov {

enum class DomainShape { ball, cube };

std::string to_string(DomainShape shape);
DomainShape parse_domain_shape(std::string_view name);

/// The averaging set D centered at the origin: a Euclidean ball of the given
/// radius, or a cube of the given half-width.
struct AveragingDomain {
  DomainShape shape = DomainShape::ball;
  double radius = 1.0;
  int dim = 1;
};

/// Validating constructor; rejects non-positive radius or dimension.
AveragingDomain make_domain(DomainShape shape, double radius, int dim);

/// Lebesgue measure: (2r)^n for the cube, pi^{n/2} r^n / Gamma(n/2 + 1) for the ball.
double measure(const AveragingDomain& domain);

/// 2r for the ball, 2r*sqrt(n) for the cube.
double diameter(const AveragingDomain& domain);

/// Lipschitz constant of the Hessian of the doubly averaged function, 2L/d^2.
double hessian_lipschitz_constant(const AveragingDomain& domain, double lipschitz);

/// Bound on the Hessian norm of the doubly averaged function used by the
/// regularized Newton methods, L/d.
double gradient_norm_bound_constant(const AveragingDomain& domain, double lipschitz);

/// Per-coordinate second moment E[y_i^2] of the uniform distribution on D.
double second_moment(const AveragingDomain& domain);

/// True iff v lies in scale * D.
bool contains(const AveragingDomain& domain, const Eigen::Ref<const Vector>& v, double scale = 1.0);

}  // namespace steklov
