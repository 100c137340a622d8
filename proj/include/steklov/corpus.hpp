#pragma once

#include "steklov/common.hpp"
#include "steklov/domain.hpp"
#include "steklov/profile.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace steklov {

/// f(x) = 1/2 x'Ax + b'x + c with symmetric A.
struct QuadraticForm {
  Matrix A;
  Vector b;
  double c = 0.0;
};

/// A Lipschitz convex test problem. The oracles work on batches of points
/// stored column-wise; `subgradient_batch` returns one measurable selection of
/// the generalized gradient:
///   - |.|-type kinks select 0 (the minimal-norm element);
///   - max-type functions select the gradient of the lowest-index active piece.
struct ObjectiveSpec {
  using ValueBatchFn = std::function<void(const Eigen::Ref<const PointBatch>&, Eigen::Ref<Vector>)>;
  using SubgradientBatchFn = std::function<void(const Eigen::Ref<const PointBatch>&, Eigen::Ref<Matrix>)>;

  std::string name;
  int dim = 1;
  double lipschitz_const = 1.0;
  ValueBatchFn value_batch;
  SubgradientBatchFn subgradient_batch;
  std::optional<Vector> minimizer;
  double min_value = 0.0;
  bool is_convex = true;

  // Structure used by the closed-form references. A separable spec is
  // f(x) = sum_i profile(x_i).
  std::optional<PiecewiseQuadratic> separable_profile;
  std::optional<QuadraticForm> quadratic;

  bool has_closed_form_smoothing() const { return separable_profile.has_value() || quadratic.has_value(); }
};

double evaluate(const ObjectiveSpec& spec, const Eigen::Ref<const Vector>& x);
Vector subgradient(const ObjectiveSpec& spec, const Eigen::Ref<const Vector>& x);

struct CorpusEntry {
  std::string name;
  int min_dim;
  int max_dim;
  int default_dim;
  std::string description;
};

const std::vector<CorpusEntry>& corpus_entries();

/// Builds a shipped spec by name; unknown names raise ConfigError, dimensions
/// outside the entry's range raise InvalidInput.
ObjectiveSpec make_objective(std::string_view name, int dim);

/// Every shipped entry instantiated at its default dimension.
std::vector<ObjectiveSpec> list_corpus();

ObjectiveSpec make_abs1d();
ObjectiveSpec make_l1(int dim);
ObjectiveSpec make_maxlin(int dim);
ObjectiveSpec make_linf(int dim);
ObjectiveSpec make_quad(int dim);
ObjectiveSpec make_huberized_l1(int dim, double delta = 1.0);

// Helpers for building ad-hoc specs (tests, fault injection).
ObjectiveSpec make_quadratic(std::string name, const Matrix& A, const Vector& b, double c = 0.0);
ObjectiveSpec make_constant(int dim, double value);
ObjectiveSpec make_affine(const Vector& slope, double offset);

// Closed-form smoothed references. Available for quadratic specs on any
// domain and for separable specs on cubes (or intervals in 1D).
bool supports_closed_form(const ObjectiveSpec& spec, const AveragingDomain& domain);
double reference_value(const ObjectiveSpec& spec, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                       Depth depth);
Vector reference_gradient(const ObjectiveSpec& spec, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                          Depth depth);
/// Only the twice-averaged Hessian exists everywhere; Depth::single raises CapabilityError.
Matrix reference_hessian(const ObjectiveSpec& spec, const AveragingDomain& domain, const Eigen::Ref<const Vector>& x,
                         Depth depth);

using SmoothedQuantity = std::variant<double, Vector, Matrix>;
SmoothedQuantity reference_smoothed(const ObjectiveSpec& spec, const AveragingDomain& domain,
                                    const Eigen::Ref<const Vector>& x, Order order, Depth depth);

}  // namespace steklov
