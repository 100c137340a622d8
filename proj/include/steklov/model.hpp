#pragma once

#include "steklov/common.hpp"
#include "steklov/corpus.hpp"
#include "steklov/domain.hpp"
#include "steklov/smoothing.hpp"

#include <cstdint>
#include <functional>

namespace steklov {

/// Phi(y) + lambda * ||y - anchor||^2 for the twice-averaged Phi over `domain`.
/// Immutable; one object per (anchor, domain). All evaluations of one
/// surrogate share the anchor's random sample set. The objective is held by
/// reference and must outlive the surrogate.
class RegularizedSurrogate {
 public:
  RegularizedSurrogate(const ObjectiveSpec& objective, const AveragingDomain& domain, const EstimatorConfig& estimator,
                       const Eigen::Ref<const Vector>& anchor, double reg_weight);

  const ObjectiveSpec& objective() const { return objective_.get(); }
  const AveragingDomain& domain() const { return domain_; }
  const EstimatorConfig& estimator() const { return estimator_; }
  const Vector& anchor() const { return anchor_; }
  double reg_weight() const { return reg_weight_; }
  std::uint64_t sample_key() const { return sample_key_; }

  double value(const Eigen::Ref<const Vector>& y) const;
  Vector gradient(const Eigen::Ref<const Vector>& y) const;
  Matrix hessian(const Eigen::Ref<const Vector>& y) const;

  struct Jet {
    double value;
    Vector gradient;
    Matrix hessian;
  };
  /// Value, gradient and Hessian from one estimator pass.
  Jet jet(const Eigen::Ref<const Vector>& y) const;

 private:
  void check(const Eigen::Ref<const Vector>& y) const;

  std::reference_wrapper<const ObjectiveSpec> objective_;
  AveragingDomain domain_;
  EstimatorConfig estimator_;
  Vector anchor_;
  double reg_weight_;
  std::uint64_t sample_key_;
};

double surrogate_value(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y);
Vector surrogate_gradient(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y);
Matrix surrogate_hessian(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y);

struct SandwichReport {
  bool lower_ok = false;  // eig_min >= L_s (1 - 1e-3)
  bool upper_ok = false;  // eig_max <= 3 L_s (1 + 1e-3)
  double eig_min = 0.0;
  double eig_max = 0.0;
  bool regularizer_floor_ok = false;  // diagnostic: eig_min >= 2 lambda (1 - 1e-3)
};

inline constexpr double kSandwichTolerance = 1e-3;

/// Spectral check of the surrogate Hessian at y against [L_s, 3 L_s].
SandwichReport check_hessian_sandwich(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y, double L_s);

/// Solves H x = rhs for symmetric positive definite H. On a failed
/// factorization retries once with 1e-10 * ||H|| added to the diagonal, then
/// throws IndefiniteHessian.
Vector solve_spd(const Eigen::Ref<const Matrix>& H, const Eigen::Ref<const Vector>& rhs);

}  // namespace steklov
