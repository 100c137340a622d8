#pragma once

#include "steklov/common.hpp"
#include "steklov/corpus.hpp"
#include "steklov/domain.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace steklov {

enum class EstimatorMethod { closed_form, quadrature, monte_carlo };

std::string to_string(EstimatorMethod method);
EstimatorMethod parse_estimator_method(std::string_view name);

struct EstimatorConfig {
  EstimatorMethod method = EstimatorMethod::monte_carlo;
  int outer_samples = 1024;  // z-samples of the second averaging
  int inner_samples = 1024;  // y-samples of the first averaging
  int quadrature_points_per_axis = 32;
  double fd_step_factor = 0.1;  // Hessian difference step is fd_step_factor * r
  std::uint64_t seed = 1;
};

void validate(const EstimatorConfig& cfg);

template <typename Payload>
struct SmoothingEstimate {
  Order order = Order::value;
  Payload payload{};
  long long samples_used = 0;
  double stderr_estimate = 0.0;  // largest entry of stderr_entries
  Payload stderr_entries{};      // per-entry standard errors (zero for deterministic methods)
};

using ValueEstimate = SmoothingEstimate<double>;
using GradientEstimate = SmoothingEstimate<Vector>;
using HessianEstimate = SmoothingEstimate<Matrix>;

/// Value, gradient and Hessian of the twice-averaged function from one
/// shared sample set. The Hessian is filled only when requested.
struct SmoothingJet {
  ValueEstimate value;
  GradientEstimate gradient;
  std::optional<HessianEstimate> hessian;
};

// `sample_key` selects the random sample set (monte_carlo only). By default
// it is a hash of x; passing a fixed key gives common random numbers across
// different query points.
ValueEstimate single_average_value(const ObjectiveSpec& f, const AveragingDomain& domain,
                                   const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                   std::optional<std::uint64_t> sample_key = std::nullopt);
GradientEstimate single_average_gradient(const ObjectiveSpec& f, const AveragingDomain& domain,
                                         const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                         std::optional<std::uint64_t> sample_key = std::nullopt);

ValueEstimate double_average_value(const ObjectiveSpec& f, const AveragingDomain& domain,
                                   const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                   std::optional<std::uint64_t> sample_key = std::nullopt);
GradientEstimate double_average_gradient(const ObjectiveSpec& f, const AveragingDomain& domain,
                                         const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                         std::optional<std::uint64_t> sample_key = std::nullopt);
/// Central differences of the averaged gradient along each axis with step
/// fd_step_factor * r, every shifted estimate using the sample set of x.
HessianEstimate double_average_hessian(const ObjectiveSpec& f, const AveragingDomain& domain,
                                       const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg,
                                       std::optional<std::uint64_t> sample_key = std::nullopt);
SmoothingJet double_average_jet(const ObjectiveSpec& f, const AveragingDomain& domain,
                                const Eigen::Ref<const Vector>& x, const EstimatorConfig& cfg, bool with_hessian,
                                std::optional<std::uint64_t> sample_key = std::nullopt);

/// Radius below which difference Hessians are refused.
inline constexpr double kMinHessianRadius = 1e-8;

}  // namespace steklov
