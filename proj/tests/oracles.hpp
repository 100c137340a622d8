#pragma once

// Reference computations for tests. Nothing here calls the library's
// smoothing code: the rules are plain nested midpoint sums and the |x|
// formulas are derived by hand.

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

using Fn1 = std::function<double(double)>;

// (1/2r) * integral of f over [x-r, x+r], P-point midpoint rule.
inline double midpoint_single(const Fn1& f, double x, double r, int P) {
  double sum = 0.0;
  for (int i = 0; i < P; ++i) sum += f(x + r * (-1.0 + (2.0 * i + 1.0) / P));
  return sum / P;
}

// Nested midpoint rule for the twice-averaged function, P*P evaluations.
inline double midpoint_double(const Fn1& f, double x, double r, int P) {
  double sum = 0.0;
  for (int j = 0; j < P; ++j) sum += midpoint_single(f, x + r * (-1.0 + (2.0 * j + 1.0) / P), r, P);
  return sum / P;
}

inline double central_diff(const Fn1& f, double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }
inline double second_diff(const Fn1& f, double x, double h) { return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h); }

// |x| averaged once over [-r, r].
inline double abs_single(double x, double r) {
  const double a = std::abs(x);
  return a >= r ? a : (x * x + r * r) / (2.0 * r);
}
inline double abs_single_slope(double x, double r) {
  return std::abs(x) >= r ? (x > 0 ? 1.0 : -1.0) : x / r;
}

// Closed forms written piecewise from the triangle density k(u) = (2r - |u|)/(4r^2):
//   Phi(x) = integral |x - u| k(u) du.
inline double abs_double_value(double x, double r) {
  const double a = std::abs(x);
  if (a >= 2.0 * r) return a;
  // split |a - u| (2r - |u|) at u = 0 and u = a
  auto F = [&](double lo, double hi, double sgn_a_minus_u, double sgn_u) {
    // integral of s1*(a-u) * (2r - s2*u) du over [lo, hi]
    auto prim = [&](double u) {
      const double s1 = sgn_a_minus_u;
      const double s2 = sgn_u;
      return s1 * (2.0 * r * a * u - 2.0 * r * u * u / 2.0 - s2 * a * u * u / 2.0 + s2 * u * u * u / 3.0);
    };
    return prim(hi) - prim(lo);
  };
  double total = F(-2.0 * r, 0.0, 1.0, -1.0) + F(0.0, a, 1.0, 1.0) + F(a, 2.0 * r, -1.0, 1.0);
  return total / (4.0 * r * r);
}
inline double abs_double_slope(double x, double r) {
  const double a = std::abs(x);
  if (a >= 2.0 * r) return x > 0 ? 1.0 : -1.0;
  const double g = (4.0 * r * a - a * a) / (4.0 * r * r);
  return x >= 0 ? g : -g;
}
inline double abs_double_curvature(double x, double r) {
  const double a = std::abs(x);
  return a >= 2.0 * r ? 0.0 : (2.0 * r - a) / (2.0 * r * r);
}

}  // namespace oracle
