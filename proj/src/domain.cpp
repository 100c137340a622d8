#include "steklov/domain.hpp"

#include <cmath>
#include <numbers>

namespace steklov {

std::string to_string(DomainShape shape) {
  return shape == DomainShape::ball ? "ball" : "cube";
}

DomainShape parse_domain_shape(std::string_view name) {
  if (name == "ball") return DomainShape::ball;
  if (name == "cube") return DomainShape::cube;
  throw ConfigError("unknown domain shape '" + std::string(name) + "'");
}

AveragingDomain make_domain(DomainShape shape, double radius, int dim) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("averaging domain radius must be positive and finite");
  }
  if (dim <= 0) throw InvalidInput("averaging domain dimension must be positive");
  return AveragingDomain{shape, radius, dim};
}

double measure(const AveragingDomain& domain) {
  const double n = domain.dim;
  if (domain.shape == DomainShape::cube) return std::pow(2.0 * domain.radius, n);
  return std::pow(std::numbers::pi, n / 2.0) * std::pow(domain.radius, n) / std::tgamma(n / 2.0 + 1.0);
}

double diameter(const AveragingDomain& domain) {
  if (domain.shape == DomainShape::ball) return 2.0 * domain.radius;
  return 2.0 * domain.radius * std::sqrt(static_cast<double>(domain.dim));
}

double hessian_lipschitz_constant(const AveragingDomain& domain, double lipschitz) {
  if (!(lipschitz > 0.0)) throw InvalidInput("Lipschitz constant must be positive");
  const double d = diameter(domain);
  return 2.0 * lipschitz / (d * d);
}

double gradient_norm_bound_constant(const AveragingDomain& domain, double lipschitz) {
  if (!(lipschitz > 0.0)) throw InvalidInput("Lipschitz constant must be positive");
  return lipschitz / diameter(domain);
}

double second_moment(const AveragingDomain& domain) {
  const double r2 = domain.radius * domain.radius;
  if (domain.shape == DomainShape::cube) return r2 / 3.0;
  return r2 / (domain.dim + 2.0);
}

bool contains(const AveragingDomain& domain, const Eigen::Ref<const Vector>& v, double scale) {
  require_dim(v.size(), domain.dim, "contains");
  const double reach = scale * domain.radius;
  if (domain.shape == DomainShape::ball) return v.norm() <= reach;
  return v.cwiseAbs().maxCoeff() <= reach;
}

}  // namespace steklov
