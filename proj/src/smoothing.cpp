#include "steklov/smoothing.hpp"

#include "steklov/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace steklov {

std::string to_string(EstimatorMethod method) {
  switch (method) {
    case EstimatorMethod::closed_form:
      return "closed_form";
    case EstimatorMethod::quadrature:
      return "quadrature";
    case EstimatorMethod::monte_carlo:
      break;
  }
  return "monte_carlo";
}

EstimatorMethod parse_estimator_method(std::string_view name) {
  if (name == "closed_form") return EstimatorMethod::closed_form;
  if (name == "quadrature") return EstimatorMethod::quadrature;
  if (name == "monte_carlo") return EstimatorMethod::monte_carlo;
  throw ConfigError("unknown estimator '" + std::string(name) + "' (closed_form|quadrature|monte_carlo)");
}

void validate(const EstimatorConfig& cfg) {
  if (cfg.outer_samples < 1 || cfg.inner_samples < 1) throw InvalidInput("sample counts must be positive");
  if (cfg.quadrature_points_per_axis < 1) throw InvalidInput("quadrature_points_per_axis must be positive");
  if (!(cfg.fd_step_factor > 0.0 && cfg.fd_step_factor < 1.0)) throw InvalidInput("fd_step_factor must lie in (0,1)");
}

namespace {

constexpr std::uint64_t kOuterLane = 0;
constexpr std::uint64_t kInnerLane = 1;
constexpr Eigen::Index kChunk = Eigen::Index{1} << 15;

struct Wanted {
  bool value = false;
  bool gradient = false;
  bool hessian = false;
};

// Mean and standard error of each entry of a two-way (outer x inner) sample
// design whose inner sample set is shared by all outer samples. The variance
// of the grand mean is estimated from the spread of the row means and of the
// column means.
class TwoWayStats {
 public:
  TwoWayStats(Eigen::Index entries, Eigen::Index outer, Eigen::Index inner)
      : row_means_(Matrix::Zero(entries, outer)), col_means_(Matrix::Zero(entries, inner)) {}

  void add(Eigen::Index j, const Eigen::Ref<const Matrix>& cells) {
    row_means_.col(j) = cells.rowwise().mean();
    col_means_ += cells / static_cast<double>(row_means_.cols());
  }

  Matrix& row_means() { return row_means_; }
  Matrix& col_means() { return col_means_; }

  Vector mean() const { return row_means_.rowwise().mean(); }

  Vector standard_error() const {
    const Eigen::Index outer = row_means_.cols();
    const Eigen::Index inner = col_means_.cols();
    Vector var = Vector::Zero(row_means_.rows());
    if (outer > 1) var += spread(row_means_) / static_cast<double>(outer);
    if (inner > 1) var += spread(col_means_) / static_cast<double>(inner);
    return var.cwiseSqrt();
  }

 private:
  static Vector spread(const Matrix& m) {
    const Vector mu = m.rowwise().mean();
    return (m.colwise() - mu).rowwise().squaredNorm() / static_cast<double>(m.cols() - 1);
  }

  Matrix row_means_;
  Matrix col_means_;
};

// Sums of a piecewise-quadratic profile and its slope over every shift a + s_i
// of a fixed sample set, in O(pieces * log M) per query through prefix sums of
// the sorted samples.
class SortedSums {
 public:
  explicit SortedSums(const Eigen::Ref<const Vector>& samples) : s_(samples.data(), samples.data() + samples.size()) {
    std::sort(s_.begin(), s_.end());
    s1_.assign(s_.size() + 1, 0.0);
    s2_.assign(s_.size() + 1, 0.0);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      s1_[i + 1] = s1_[i] + s_[i];
      s2_[i + 1] = s2_[i] + s_[i] * s_[i];
    }
  }

  double profile_sum(const PiecewiseQuadratic& p, double a) const {
    double sum = 0.0;
    for_each_piece(p, a, [&](const std::array<double, 3>& c, double cnt, double m1, double m2) {
      sum += cnt * (c[0] + a * (c[1] + a * c[2])) + m1 * (c[1] + 2.0 * c[2] * a) + m2 * c[2];
    });
    return sum;
  }

  double slope_sum(const PiecewiseQuadratic& p, double a) const {
    double sum = 0.0;
    for_each_piece(p, a, [&](const std::array<double, 3>& c, double cnt, double m1, double) {
      sum += cnt * (c[1] + 2.0 * c[2] * a) + 2.0 * c[2] * m1;
    });
    return sum;
  }

 private:
  // Piece k covers a + s in [breaks[k-1], breaks[k]).
  template <typename Fn>
  void for_each_piece(const PiecewiseQuadratic& p, double a, Fn&& fn) const {
    std::size_t lo = 0;
    for (std::size_t k = 0; k < p.pieces.size(); ++k) {
      const std::size_t hi =
          k < p.breaks.size()
              ? static_cast<std::size_t>(std::lower_bound(s_.begin(), s_.end(), p.breaks[k] - a) - s_.begin())
              : s_.size();
      if (hi > lo) fn(p.pieces[k], static_cast<double>(hi - lo), s1_[hi] - s1_[lo], s2_[hi] - s2_[lo]);
      lo = std::max(lo, hi);
    }
  }

  std::vector<double> s_;
  std::vector<double> s1_;
  std::vector<double> s2_;
};

// Entry (a, k) of the flattened difference matrix sits at row k*n + a.
void symmetrize_rows(Eigen::Ref<Matrix> cells, int n) {
  for (int a = 0; a < n; ++a) {
    for (int k = a + 1; k < n; ++k) {
      const Vector avg = 0.5 * (cells.row(k * n + a) + cells.row(a * n + k)).transpose();
      cells.row(k * n + a) = avg.transpose();
      cells.row(a * n + k) = avg.transpose();
    }
  }
}

Matrix symmetric(const Matrix& h) { return 0.5 * (h + h.transpose()); }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw EstimatorFailure(std::string("non-finite ") + what + " estimate");
}
void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw EstimatorFailure(std::string("non-finite ") + what + " estimate");
}

void check_inputs(const ObjectiveSpec& f, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                  const EstimatorConfig& cfg) {
  require_dim(x.size(), f.dim, "smoothing query point");
  require_dim(domain.dim, f.dim, "averaging domain");
  if (!(domain.radius > 0.0)) throw DegenerateDomain("averaging radius must be positive");
  validate(cfg);
  if (cfg.method == EstimatorMethod::quadrature && f.dim > kMaxQuadratureDim) {
    throw CapabilityError("quadrature is limited to dimension <= 4; use monte_carlo or closed_form");
  }
  if (cfg.method == EstimatorMethod::closed_form && !supports_closed_form(f, domain)) {
    throw CapabilityError("no closed-form smoothing for '" + f.name + "' on a " + to_string(domain.shape) +
                          " domain in dimension " + std::to_string(domain.dim));
  }
}

double hessian_step(const AveragingDomain& domain, const EstimatorConfig& cfg) {
  if (domain.radius < kMinHessianRadius) {
    throw DegenerateDomain("averaging radius below " + std::to_string(kMinHessianRadius) + " for a difference Hessian");
  }
  return cfg.fd_step_factor * domain.radius;
}

// Weighted sums over x + offsets (plus the axis shifts for the Hessian).
SmoothingJet weighted_jet(const ObjectiveSpec& f, const Eigen::Ref<const Vector>& x, const QuadratureRule& rule,
                          double radius, double h, Wanted want) {
  const int n = f.dim;
  const Eigen::Index total = rule.nodes.cols();
  double value = 0.0;
  Vector grad = Vector::Zero(n);
  Matrix hess = Matrix::Zero(n, n);
  PointBatch pts;
  Vector vals;
  Matrix g;
  Matrix g_minus;
  for (Eigen::Index start = 0; start < total; start += kChunk) {
    const Eigen::Index len = std::min(kChunk, total - start);
    const auto w = rule.weights.segment(start, len);
    pts = (radius * rule.nodes.middleCols(start, len)).colwise() + x;
    if (want.value) {
      vals.resize(len);
      f.value_batch(pts, vals);
      value += w.dot(vals);
    }
    if (want.gradient) {
      g.resize(n, len);
      f.subgradient_batch(pts, g);
      grad += g * w;
    }
    if (want.hessian) {
      g.resize(n, len);
      g_minus.resize(n, len);
      for (int k = 0; k < n; ++k) {
        pts.row(k).array() += h;
        f.subgradient_batch(pts, g);
        pts.row(k).array() -= 2.0 * h;
        f.subgradient_batch(pts, g_minus);
        pts.row(k).array() += h;
        hess.col(k) += (g - g_minus) * w / (2.0 * h);
      }
    }
  }
  SmoothingJet jet;
  jet.value.order = Order::value;
  jet.value.payload = value;
  jet.value.samples_used = total;
  jet.gradient.order = Order::gradient;
  jet.gradient.payload = grad;
  jet.gradient.stderr_entries = Vector::Zero(n);
  jet.gradient.samples_used = total;
  if (want.hessian) {
    HessianEstimate he;
    he.order = Order::hessian;
    he.payload = symmetric(hess);
    he.stderr_entries = Matrix::Zero(n, n);
    he.samples_used = total;
    jet.hessian = he;
  }
  return jet;
}

// Separable objective on a cube: the product rule factorises, so the
// n-dimensional weighted sum is n one-dimensional sums over the axis rule.
SmoothingJet separable_weighted_jet(const PiecewiseQuadratic& p, const Eigen::Ref<const Vector>& x,
                                    const QuadratureRule& axis_rule, double radius, double h, Wanted want) {
  const Eigen::Index n = x.size();
  const Eigen::Index count = axis_rule.nodes.cols();
  double value = 0.0;
  Vector grad = Vector::Zero(n);
  Matrix hess = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    double v = 0.0, g = 0.0, dg = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
      const double w = axis_rule.weights[i];
      const double t = x[c] + radius * axis_rule.nodes(0, i);
      if (want.value) v += w * p.value(t);
      if (want.gradient) g += w * p.slope(t);
      if (want.hessian) dg += w * (p.slope(t + h) - p.slope(t - h));
    }
    value += v;
    grad[c] = g;
    hess(c, c) = dg / (2.0 * h);
  }
  SmoothingJet jet;
  jet.value.order = Order::value;
  jet.value.payload = value;
  jet.value.samples_used = count * n;
  jet.gradient.order = Order::gradient;
  jet.gradient.payload = grad;
  jet.gradient.stderr_entries = Vector::Zero(n);
  jet.gradient.samples_used = count * n;
  if (want.hessian) {
    HessianEstimate he;
    he.order = Order::hessian;
    he.payload = hess;
    he.stderr_entries = Matrix::Zero(n, n);
    he.samples_used = count * n;
    jet.hessian = he;
  }
  return jet;
}

// Fills the two-way statistics of a separable objective, coordinate by
// coordinate. Same samples and same estimator as the generic loop, summed
// through sorted prefix sums instead of N*M oracle calls.
void separable_stats(const PiecewiseQuadratic& p, const Eigen::Ref<const Vector>& x, const PointBatch& ys,
                     const PointBatch& zs, double h, Wanted want, TwoWayStats& value_stats, TwoWayStats& grad_stats,
                     std::optional<TwoWayStats>& hess_stats) {
  const Eigen::Index n = x.size();
  // Fills one side of the design: entry means over `other` for each column of `mine`.
  auto fill = [&](const PointBatch& mine, const PointBatch& other, Matrix& values, Matrix& grads, Matrix* hess) {
    const double count = static_cast<double>(other.cols());
    for (Eigen::Index c = 0; c < n; ++c) {
      const SortedSums sums(other.row(c).transpose());
      for (Eigen::Index j = 0; j < mine.cols(); ++j) {
        const double a = x[c] + mine(c, j);
        if (want.value) values(0, j) += sums.profile_sum(p, a) / count;
        if (want.gradient) grads(c, j) = sums.slope_sum(p, a) / count;
        if (hess != nullptr) {
          (*hess)(c * n + c, j) = (sums.slope_sum(p, a + h) - sums.slope_sum(p, a - h)) / (2.0 * h * count);
        }
      }
    }
  };
  fill(zs, ys, value_stats.row_means(), grad_stats.row_means(), hess_stats ? &hess_stats->row_means() : nullptr);
  fill(ys, zs, value_stats.col_means(), grad_stats.col_means(), hess_stats ? &hess_stats->col_means() : nullptr);
}

// Monte Carlo over x + z_j + y_i with N outer and M inner samples; depth
// single uses the inner samples only.
SmoothingJet sampled_jet(const ObjectiveSpec& f, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                         const EstimatorConfig& cfg, std::uint64_t key, Depth depth, double h, Wanted want) {
  const int n = f.dim;
  const Eigen::Index inner = cfg.inner_samples;
  const Eigen::Index outer = depth == Depth::single ? 1 : cfg.outer_samples;

  PointBatch ys(n, inner);
  sample_domain(domain, CounterStream(cfg.seed, key, kInnerLane), ys);
  PointBatch zs = PointBatch::Zero(n, outer);
  if (depth == Depth::twice) sample_domain(domain, CounterStream(cfg.seed, key, kOuterLane), zs);

  TwoWayStats value_stats(1, outer, inner);
  TwoWayStats grad_stats(n, outer, inner);
  std::optional<TwoWayStats> hess_stats;
  if (want.hessian) hess_stats.emplace(static_cast<Eigen::Index>(n) * n, outer, inner);

  if (f.separable_profile) {
    separable_stats(*f.separable_profile, x, ys, zs, h, want, value_stats, grad_stats, hess_stats);
  } else {
    PointBatch pts(n, inner);
    Vector vals(inner);
    Matrix g(n, inner);
    Matrix g_minus(n, inner);
    Matrix diffs(want.hessian ? n * n : 0, inner);
    for (Eigen::Index j = 0; j < outer; ++j) {
      pts = ys.colwise() + (x + zs.col(j));
      if (want.value) {
        f.value_batch(pts, vals);
        value_stats.add(j, vals.transpose());
      }
      if (want.gradient) {
        f.subgradient_batch(pts, g);
        grad_stats.add(j, g);
      }
      if (want.hessian) {
        for (int k = 0; k < n; ++k) {
          pts.row(k).array() += h;
          f.subgradient_batch(pts, g);
          pts.row(k).array() -= 2.0 * h;
          f.subgradient_batch(pts, g_minus);
          pts.row(k).array() += h;
          diffs.middleRows(static_cast<Eigen::Index>(k) * n, n) = (g - g_minus) / (2.0 * h);
        }
        symmetrize_rows(diffs, n);
        hess_stats->add(j, diffs);
      }
    }
  }

  const long long used = static_cast<long long>(outer) * inner;
  SmoothingJet jet;
  jet.value.order = Order::value;
  jet.value.samples_used = used;
  if (want.value) {
    jet.value.payload = value_stats.mean()[0];
    jet.value.stderr_entries = value_stats.standard_error()[0];
    jet.value.stderr_estimate = jet.value.stderr_entries;
  }
  jet.gradient.order = Order::gradient;
  jet.gradient.samples_used = used;
  jet.gradient.payload = Vector::Zero(n);
  jet.gradient.stderr_entries = Vector::Zero(n);
  if (want.gradient) {
    jet.gradient.payload = grad_stats.mean();
    jet.gradient.stderr_entries = grad_stats.standard_error();
    jet.gradient.stderr_estimate = jet.gradient.stderr_entries.maxCoeff();
  }
  if (want.hessian) {
    HessianEstimate he;
    he.order = Order::hessian;
    he.samples_used = used;
    he.payload = symmetric(hess_stats->mean().reshaped(n, n));
    he.stderr_entries = hess_stats->standard_error().reshaped(n, n);
    he.stderr_estimate = he.stderr_entries.maxCoeff();
    jet.hessian = he;
  }
  return jet;
}

SmoothingJet closed_form_jet(const ObjectiveSpec& f, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                             Depth depth, Wanted want) {
  SmoothingJet jet;
  jet.value.order = Order::value;
  jet.gradient.order = Order::gradient;
  jet.gradient.payload = Vector::Zero(f.dim);
  jet.gradient.stderr_entries = Vector::Zero(f.dim);
  if (want.value) jet.value.payload = reference_value(f, domain, x, depth);
  if (want.gradient) jet.gradient.payload = reference_gradient(f, domain, x, depth);
  if (want.hessian) {
    HessianEstimate he;
    he.order = Order::hessian;
    he.payload = symmetric(reference_hessian(f, domain, x, depth));
    he.stderr_entries = Matrix::Zero(f.dim, f.dim);
    jet.hessian = he;
  }
  return jet;
}

SmoothingJet estimate(const ObjectiveSpec& f, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                      const EstimatorConfig& cfg, std::optional<std::uint64_t> sample_key, Depth depth, Wanted want) {
  check_inputs(f, domain, x, cfg);
  double h = want.hessian ? hessian_step(domain, cfg) : 0.0;
  if (want.hessian && cfg.method == EstimatorMethod::quadrature) {
    // Whole lattice spacings: the weighted subgradient sum is a staircase on
    // the lattice, so an unaligned step counts a fractional number of jumps.
    const double spacing = 2.0 * domain.radius / cfg.quadrature_points_per_axis;
    h = std::max(1.0, std::round(h / spacing)) * spacing;
  }
  SmoothingJet jet;
  switch (cfg.method) {
    case EstimatorMethod::closed_form:
      jet = closed_form_jet(f, domain, x, depth, want);
      break;
    case EstimatorMethod::quadrature:
      if (f.separable_profile && domain.shape == DomainShape::cube) {
        jet = separable_weighted_jet(*f.separable_profile, x,
                                     quadrature_rule(domain.shape, 1, cfg.quadrature_points_per_axis, depth),
                                     domain.radius, h, want);
      } else {
        jet = weighted_jet(f, x, quadrature_rule(domain.shape, domain.dim, cfg.quadrature_points_per_axis, depth),
                           domain.radius, h, want);
      }
      break;
    case EstimatorMethod::monte_carlo:
      jet = sampled_jet(f, domain, x, cfg, sample_key.value_or(hash_point(x)), depth, h, want);
      break;
  }
  if (want.value) require_finite(jet.value.payload, "value");
  if (want.gradient) require_finite(jet.gradient.payload, "gradient");
  if (want.hessian) require_finite(jet.hessian->payload, "Hessian");
  return jet;
}

}  // namespace

ValueEstimate single_average_value(const ObjectiveSpec& f, const AveragingDomain& domain,
                                   const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                   std::optional<std::uint64_t> sample_key) {
  return estimate(f, domain, x, cfg, sample_key, Depth::single, {.value = true}).value;
}

GradientEstimate single_average_gradient(const ObjectiveSpec& f, const AveragingDomain& domain,
                                         const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                         std::optional<std::uint64_t> sample_key) {
  return estimate(f, domain, x, cfg, sample_key, Depth::single, {.gradient = true}).gradient;
}

ValueEstimate double_average_value(const ObjectiveSpec& f, const AveragingDomain& domain,
                                   const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                   std::optional<std::uint64_t> sample_key) {
  return estimate(f, domain, x, cfg, sample_key, Depth::twice, {.value = true}).value;
}

GradientEstimate double_average_gradient(const ObjectiveSpec& f, const AveragingDomain& domain,
                                         const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                         std::optional<std::uint64_t> sample_key) {
  return estimate(f, domain, x, cfg, sample_key, Depth::twice, {.gradient = true}).gradient;
}

HessianEstimate double_average_hessian(const ObjectiveSpec& f, const AveragingDomain& domain,
                                       const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                       std::optional<std::uint64_t> sample_key) {
  return *estimate(f, domain, x, cfg, sample_key, Depth::twice, {.hessian = true}).hessian;
}

SmoothingJet double_average_jet(const ObjectiveSpec& f, const AveragingDomain& domain,
                                const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg, bool with_hessian,
                                std::optional<std::uint64_t> sample_key) {
  return estimate(f, domain, x, cfg, sample_key, Depth::twice, {true, true, with_hessian});
}

}  // namespace steklov
