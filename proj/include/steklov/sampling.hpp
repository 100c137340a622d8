#pragma once

#include "steklov/common.hpp"
#include "steklov/domain.hpp"

#include <cstdint>

namespace steklov {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Hash of the exact bit patterns of a point's coordinates.
std::uint64_t hash_point(const Eigen::Ref<const Vector>& x);

/// Counter-based uniform stream: the i-th draw depends only on
/// (seed, key, lane, i), never on call order.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t key, std::uint64_t lane);

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t i) const;

 private:
  std::uint64_t base_;
};

/// Fills out's columns with uniform samples from D; column j only uses draws
/// indexed by j, so prefixes of a longer sample set are reproducible.
void sample_domain(const AveragingDomain& domain, const CounterStream& stream, Eigen::Ref<PointBatch> out);

/// Weighted nodes for the unit-radius domain. Depth::single is a midpoint
/// lattice (filtered to the ball for ball domains). Depth::twice is the set of
/// pairwise sums of that lattice with multiplicities as weights, which is the
/// nested double midpoint rule with repeated nodes merged.
struct QuadratureRule {
  PointBatch nodes;
  Vector weights;  // sums to 1
};

/// Largest merged rule that will be built.
inline constexpr Eigen::Index kMaxQuadratureNodes = Eigen::Index{1} << 22;
inline constexpr int kMaxQuadratureDim = 4;

/// Cached; throws CapabilityError for dim > 4 or oversized rules.
const QuadratureRule& quadrature_rule(DomainShape shape, int dim, int points_per_axis, Depth depth);

}  // namespace steklov
