#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace steklov {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

// Batches of points are stored column-wise: one point per column.
using PointBatch = Matrix;

/// Derivative order of a smoothed quantity.
enum class Order { value, gradient, hessian };

/// Number of averaging passes: phi (single) or Phi (twice).
enum class Depth { single, twice };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition (dimension mismatch, bad parameter).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The requested estimator or closed form is not available for this combination.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class DegenerateDomain : public Error {
 public:
  using Error::Error;
};

/// Non-finite estimates or a Hessian that stays indefinite after jitter.
class EstimatorFailure : public Error {
 public:
  using Error::Error;
};

class IndefiniteHessian : public EstimatorFailure {
 public:
  using EstimatorFailure::EstimatorFailure;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(Eigen::Index actual, int expected, const char* what) {
  if (actual != expected) {
    throw InvalidInput(std::string(what) + ": expected dimension " + std::to_string(expected) +
                       ", got " + std::to_string(actual));
  }
}

}  // namespace steklov
