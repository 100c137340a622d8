#pragma once

#include "steklov/common.hpp"

#include <array>
#include <vector>

namespace steklov {

/// Continuous piecewise-quadratic function of one variable. Piece k covers
/// [breaks[k-1], breaks[k]] and evaluates c0 + c1*t + c2*t^2.
struct PiecewiseQuadratic {
  std::vector<double> breaks;
  std::vector<std::array<double, 3>> pieces;

  std::size_t piece_index(double t) const;
  double value(double t) const;
  double slope(double t) const;  // midpoint subgradient on a break
};

/// Exact averages of a profile over the window [x-r, x+r], applied once or twice.
/// Integrals are taken piece by piece in local coordinates, so the result
/// stays accurate when |x| is large compared with r.
double averaged_value(const PiecewiseQuadratic& p, double x, double r, Depth depth);
double averaged_slope(const PiecewiseQuadratic& p, double x, double r, Depth depth);

/// Second derivative of the twice-averaged profile, including the jump
/// contributions of the profile's kinks.
double twice_averaged_curvature(const PiecewiseQuadratic& p, double x, double r);

}  // namespace steklov
