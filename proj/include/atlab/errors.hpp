#pragma once

#include <stdexcept>
#include <string>

namespace atlab {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fewer than two usable points were available for a log-log fit.
struct InsufficientPoints : Error {
  using Error::Error;
};

/// A quadrature (or a quadrature cross-check) failed to reach its tolerance.
struct QuadratureFailure : Error {
  using Error::Error;
};

/// The effect law is degenerate: heterogeneity margin c = 0.
struct DegenerateEffects : Error {
  using Error::Error;
};

/// An estimator's asymptotic variance is zero for the given population.
struct DegenerateVariance : Error {
  using Error::Error;
};

/// A difference-in-means sample has an empty treatment or control arm.
struct EmptyArm : Error {
  using Error::Error;
};

/// Requested local average lies outside [mean - c, mean + c].
struct TargetOutOfRange : Error {
  using Error::Error;
};

/// A weighting bisection could not converge to its target.
struct UnattainableBoundary : Error {
  using Error::Error;
};

/// A configuration or tabular document does not match its schema.
struct SchemaError : Error {
  using Error::Error;
};

/// A structurally valid configuration fails a semantic constraint.
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace atlab
