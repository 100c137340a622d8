#include "steklov/model.hpp"

#include "steklov/sampling.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace steklov {

RegularizedSurrogate::RegularizedSurrogate(const ObjectiveSpec& objective, const AveragingDomain& domain,
                                           const EstimatorConfig& estimator, const Eigen::Ref<const Vector>& anchor,
                                           double reg_weight)
    : objective_(objective),
      domain_(domain),
      estimator_(estimator),
      anchor_(anchor),
      reg_weight_(reg_weight),
      sample_key_(hash_point(anchor)) {
  require_dim(anchor.size(), objective.dim, "surrogate anchor");
  require_dim(domain.dim, objective.dim, "surrogate domain");
  if (!(reg_weight >= 0.0) || !std::isfinite(reg_weight)) throw InvalidInput("regularization weight must be >= 0");
  validate(estimator);
}

void RegularizedSurrogate::check(const Eigen::Ref<const Vector>& y) const {
  require_dim(y.size(), objective().dim, "surrogate argument");
}

double RegularizedSurrogate::value(const Eigen::Ref<const Vector>& y) const {
  check(y);
  return double_average_value(objective(), domain_, y, estimator_, sample_key_).payload +
         reg_weight_ * (y - anchor_).squaredNorm();
}

Vector RegularizedSurrogate::gradient(const Eigen::Ref<const Vector>& y) const {
  check(y);
  return double_average_gradient(objective(), domain_, y, estimator_, sample_key_).payload +
         2.0 * reg_weight_ * (y - anchor_);
}

Matrix RegularizedSurrogate::hessian(const Eigen::Ref<const Vector>& y) const {
  check(y);
  Matrix h = double_average_hessian(objective(), domain_, y, estimator_, sample_key_).payload;
  h.diagonal().array() += 2.0 * reg_weight_;
  return 0.5 * (h + h.transpose());
}

RegularizedSurrogate::Jet RegularizedSurrogate::jet(const Eigen::Ref<const Vector>& y) const {
  check(y);
  const SmoothingJet est = double_average_jet(objective(), domain_, y, estimator_, true, sample_key_);
  Jet out{est.value.payload + reg_weight_ * (y - anchor_).squaredNorm(),
          est.gradient.payload + 2.0 * reg_weight_ * (y - anchor_), est.hessian->payload};
  out.hessian.diagonal().array() += 2.0 * reg_weight_;
  out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  return out;
}

double surrogate_value(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y) { return s.value(y); }
Vector surrogate_gradient(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y) { return s.gradient(y); }
Matrix surrogate_hessian(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y) { return s.hessian(y); }

SandwichReport check_hessian_sandwich(const RegularizedSurrogate& s, const Eigen::Ref<const Vector>& y, double L_s) {
  const Matrix h = s.hessian(y);
  if (!h.allFinite()) throw EstimatorFailure("non-finite surrogate Hessian");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  SandwichReport report;
  report.eig_min = eig.eigenvalues().minCoeff();
  report.eig_max = eig.eigenvalues().maxCoeff();
  report.lower_ok = report.eig_min >= L_s * (1.0 - kSandwichTolerance);
  report.upper_ok = report.eig_max <= 3.0 * L_s * (1.0 + kSandwichTolerance);
  report.regularizer_floor_ok = report.eig_min >= 2.0 * s.reg_weight() * (1.0 - kSandwichTolerance);
  return report;
}

Vector solve_spd(const Eigen::Ref<const Matrix>& H, const Eigen::Ref<const Vector>& rhs) {
  if (!H.allFinite() || !rhs.allFinite()) throw EstimatorFailure("non-finite Newton system");
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) {
    Matrix jittered = H;
    jittered.diagonal().array() += 1e-10 * H.norm();
    llt.compute(jittered);
    if (llt.info() != Eigen::Success) throw IndefiniteHessian("surrogate Hessian is not positive definite");
  }
  return llt.solve(rhs);
}

}  // namespace steklov
