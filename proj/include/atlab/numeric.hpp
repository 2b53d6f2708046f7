#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace atlab {

/// Standard normal CDF, evaluated through erfc so the far left tail keeps
/// small relative error (Phi(-10) ~ 7.6e-24). Total on the extended reals.
double std_normal_cdf(double x);

/// Standard normal density (1/sqrt(2*pi)) * exp(-x^2/2).
double std_normal_pdf(double x);

/// One (n, value) observation for a convergence-rate fit.
struct RatePoint {
  std::int64_t n = 0;  // sample size, >= 1
  double value = 0.0;  // an MSE or a probability, >= 0
};

/// Least-squares line through (log n, log value).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  int n_points_used = 0;
  double residual_rms = 0.0;
};

/// Fits log(value) ~ slope * log(n) + intercept by ordinary least squares.
/// Points with value <= 0 are dropped (their logarithm is undefined);
/// n_points_used reports how many survived. Throws InsufficientPoints if
/// fewer than two usable points with distinct n remain.
RateFit log_log_ols(std::span<const RatePoint> points);

}  // namespace atlab
