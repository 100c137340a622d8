#include "steklov/sampling.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

namespace steklov {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_point(const Eigen::Ref<const Vector>& x) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i] == 0.0 ? 0.0 : x[i];  // -0 and +0 hash alike
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h = mix64(h ^ bits);
  }
  return h;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t key, std::uint64_t lane)
    : base_(mix64(mix64(mix64(seed) ^ key) ^ (lane * 0xd1b54a32d192ed03ULL))) {}

double CounterStream::uniform(std::uint64_t i) const {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(mix64(base_ + i * 0x9e3779b97f4a7c15ULL) >> 11) + 0.5) * 0x1.0p-53;
}

void sample_domain(const AveragingDomain& domain, const CounterStream& stream, Eigen::Ref<PointBatch> out) {
  const int n = domain.dim;
  require_dim(out.rows(), n, "sample_domain");
  const double r = domain.radius;
  if (domain.shape == DomainShape::cube) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const std::uint64_t base = static_cast<std::uint64_t>(j) * n;
      for (int i = 0; i < n; ++i) out(i, j) = r * (2.0 * stream.uniform(base + i) - 1.0);
    }
    return;
  }
  // Gaussian direction via Box-Muller, radius r * u^(1/n).
  const int per_point = 2 * ((n + 1) / 2) + 1;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const std::uint64_t base = static_cast<std::uint64_t>(j) * per_point;
    for (int i = 0; i < n; i += 2) {
      const double rho = std::sqrt(-2.0 * std::log(stream.uniform(base + i)));
      const double theta = 2.0 * std::numbers::pi * stream.uniform(base + i + 1);
      out(i, j) = rho * std::cos(theta);
      if (i + 1 < n) out(i + 1, j) = rho * std::sin(theta);
    }
    const double scale = r * std::pow(stream.uniform(base + per_point - 1), 1.0 / n) / out.col(j).norm();
    out.col(j) *= scale;
  }
}

namespace {

// Integer multi-index of the k-th node of a tensor lattice with `side` points per axis.
void unrank(Eigen::Index k, int side, int dim, std::vector<int>& idx) {
  for (int i = 0; i < dim; ++i) {
    idx[i] = static_cast<int>(k % side);
    k /= side;
  }
}

Eigen::Index ipow(Eigen::Index base, int e) {
  Eigen::Index v = 1;
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

QuadratureRule build_single(DomainShape shape, int dim, int p) {
  const Eigen::Index total = ipow(p, dim);
  if (total > kMaxQuadratureNodes) throw CapabilityError("quadrature lattice too large");
  std::vector<int> idx(dim);
  PointBatch nodes(dim, total);
  Eigen::Index kept = 0;
  for (Eigen::Index k = 0; k < total; ++k) {
    unrank(k, p, dim, idx);
    for (int i = 0; i < dim; ++i) nodes(i, kept) = -1.0 + (2.0 * idx[i] + 1.0) / p;
    if (shape == DomainShape::cube || nodes.col(kept).squaredNorm() <= 1.0) ++kept;
  }
  if (kept == 0) throw CapabilityError("quadrature lattice misses the ball; raise points per axis");
  QuadratureRule rule;
  rule.nodes = nodes.leftCols(kept);
  rule.weights = Vector::Constant(kept, 1.0 / static_cast<double>(kept));
  return rule;
}

QuadratureRule build_twice(DomainShape shape, int dim, int p) {
  const int side = 2 * p - 1;
  const Eigen::Index total = ipow(side, dim);
  if (total > kMaxQuadratureNodes) {
    throw CapabilityError("merged quadrature lattice would have " + std::to_string(total) +
                          " nodes; lower quadrature_points_per_axis");
  }
  // Node m (per axis) is the sum of single-lattice nodes i and j with i + j = m.
  Vector counts = Vector::Zero(total);
  std::vector<int> idx(dim);
  if (shape == DomainShape::cube) {
    for (Eigen::Index k = 0; k < total; ++k) {
      unrank(k, side, dim, idx);
      double w = 1.0;
      for (int i = 0; i < dim; ++i) w *= p - std::abs(idx[i] - (p - 1));
      counts[k] = w;
    }
  } else {
    const QuadratureRule single = build_single(shape, dim, p);
    const Eigen::Index m = single.nodes.cols();
    if (static_cast<double>(m) * static_cast<double>(m) > 0x1.0p31) {
      throw CapabilityError("ball quadrature pair count too large; lower quadrature_points_per_axis");
    }
    // Integer lattice coordinates of the kept nodes.
    Eigen::MatrixXi ints(dim, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (int i = 0; i < dim; ++i) ints(i, a) = static_cast<int>(std::lround((single.nodes(i, a) + 1.0) * p * 0.5 - 0.5));
    }
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        Eigen::Index k = 0;
        for (int i = dim - 1; i >= 0; --i) k = k * side + ints(i, a) + ints(i, b);
        counts[k] += 1.0;
      }
    }
  }
  Eigen::Index kept = (counts.array() > 0.0).count();
  QuadratureRule rule;
  rule.nodes.resize(dim, kept);
  rule.weights.resize(kept);
  Eigen::Index c = 0;
  for (Eigen::Index k = 0; k < total; ++k) {
    if (counts[k] == 0.0) continue;
    unrank(k, side, dim, idx);
    for (int i = 0; i < dim; ++i) rule.nodes(i, c) = -2.0 + 2.0 * (idx[i] + 1.0) / p;
    rule.weights[c] = counts[k];
    ++c;
  }
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace

const QuadratureRule& quadrature_rule(DomainShape shape, int dim, int points_per_axis, Depth depth) {
  if (dim < 1 || dim > kMaxQuadratureDim) {
    throw CapabilityError("quadrature is limited to dimension <= 4 (got " + std::to_string(dim) + ")");
  }
  if (points_per_axis < 1) throw InvalidInput("quadrature_points_per_axis must be positive");
  using Key = std::tuple<int, int, int, int>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<QuadratureRule>> cache;
  const Key key{static_cast<int>(shape), dim, points_per_axis, static_cast<int>(depth)};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto rule = std::make_unique<QuadratureRule>(depth == Depth::single ? build_single(shape, dim, points_per_axis)
                                                                        : build_twice(shape, dim, points_per_axis));
    it = cache.emplace(key, std::move(rule)).first;
  }
  return *it->second;
}

}  // namespace steklov
