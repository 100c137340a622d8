#include "steklov/profile.hpp"

#include <algorithm>
#include <cmath>

namespace steklov {

namespace {

constexpr double kGaussNode = 0.57735026918962576451;  // 1/sqrt(3)

double poly(const std::array<double, 3>& c, double t) { return c[0] + t * (c[1] + t * c[2]); }
double dpoly(const std::array<double, 3>& c, double t) { return c[1] + 2.0 * c[2] * t; }

// Triangle density of the sum of two independent uniforms on [-r, r].
double triangle(double u, double r) { return std::max(0.0, 2.0 * r - std::abs(u)) / (4.0 * r * r); }

// Cut [lo, hi] at the profile breaks (and at an extra point) and hand every
// segment to fn(a, b, piece).
template <typename Fn>
void for_each_segment(const PiecewiseQuadratic& p, double lo, double hi, const double* extra, Fn&& fn) {
  std::vector<double> cuts{lo};
  for (double b : p.breaks) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  if (extra != nullptr && *extra > lo && *extra < hi) cuts.push_back(*extra);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b <= a) continue;
    fn(a, b, p.pieces[p.piece_index(0.5 * (a + b))]);
  }
}

}  // namespace

std::size_t PiecewiseQuadratic::piece_index(double t) const {
  return static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), t) - breaks.begin());
}

double PiecewiseQuadratic::value(double t) const { return poly(pieces[piece_index(t)], t); }

double PiecewiseQuadratic::slope(double t) const {
  const std::size_t k = piece_index(t);
  // On a break, the midpoint of the one-sided slopes.
  if (k > 0 && breaks[k - 1] == t) return 0.5 * (dpoly(pieces[k - 1], t) + dpoly(pieces[k], t));
  return dpoly(pieces[k], t);
}

double averaged_value(const PiecewiseQuadratic& p, double x, double r, Depth depth) {
  double sum = 0.0;
  if (depth == Depth::single) {
    for_each_segment(p, x - r, x + r, nullptr, [&](double a, double b, const auto& c) {
      const double w = 0.5 * (b - a);
      sum += (b - a) * (poly(c, 0.5 * (a + b)) + c[2] * w * w / 3.0);
    });
    return sum / (2.0 * r);
  }
  for_each_segment(p, x - 2.0 * r, x + 2.0 * r, &x, [&](double a, double b, const auto& c) {
    const double m = 0.5 * (a + b);
    const double w = 0.5 * (b - a);
    const double t0 = m - w * kGaussNode;
    const double t1 = m + w * kGaussNode;
    sum += w * (poly(c, t0) * triangle(t0 - x, r) + poly(c, t1) * triangle(t1 - x, r));
  });
  return sum;
}

double averaged_slope(const PiecewiseQuadratic& p, double x, double r, Depth depth) {
  double sum = 0.0;
  if (depth == Depth::single) {
    for_each_segment(p, x - r, x + r, nullptr,
                     [&](double a, double b, const auto& c) { sum += (b - a) * dpoly(c, 0.5 * (a + b)); });
    return sum / (2.0 * r);
  }
  for_each_segment(p, x - 2.0 * r, x + 2.0 * r, &x, [&](double a, double b, const auto& c) {
    const double m = 0.5 * (a + b);
    const double w = 0.5 * (b - a);
    const double t0 = m - w * kGaussNode;
    const double t1 = m + w * kGaussNode;
    sum += w * (dpoly(c, t0) * triangle(t0 - x, r) + dpoly(c, t1) * triangle(t1 - x, r));
  });
  return sum;
}

double twice_averaged_curvature(const PiecewiseQuadratic& p, double x, double r) {
  double sum = 0.0;
  for_each_segment(p, x - 2.0 * r, x + 2.0 * r, &x, [&](double a, double b, const auto& c) {
    sum += 2.0 * c[2] * (b - a) * triangle(0.5 * (a + b) - x, r);
  });
  for (std::size_t k = 0; k < p.breaks.size(); ++k) {
    const double t = p.breaks[k];
    if (t <= x - 2.0 * r || t >= x + 2.0 * r) continue;
    const double jump = dpoly(p.pieces[k + 1], t) - dpoly(p.pieces[k], t);
    sum += jump * triangle(t - x, r);
  }
  return sum;
}

}  // namespace steklov
