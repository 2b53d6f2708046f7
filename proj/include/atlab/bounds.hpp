#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace atlab {

/// One tabulated row of the closed-form quantities at sample size n.
struct BoundRow {
  std::int64_t n = 0;
  double mismatch_prob = 0.0;
  double mse_bound = 0.0;
  double n_times_bound = 0.0;
  double exact_mse = 0.0;
};

/// P(theta != clamped target) for the exactly-normal estimator:
/// 2 * Phi(-c sqrt(n) / sigma).
double mismatch_probability(double c, double sigma, std::int64_t n);

/// The closed-form MSE upper bound
///   B(n) = c sigma sqrt(2/pi) exp(-c^2 n / (2 sigma^2)) / sqrt(n)
///        + 2 sigma^2 Phi(-c sqrt(n)/sigma) / n,
/// equal to twice the integral of x^2 over the upper normal tail beyond c.
double mse_upper_bound(double c, double sigma, std::int64_t n);

/// E[(theta - clamped target)^2] for the exactly-normal estimator, i.e.
/// E[max(0, |X| - c)^2] with X ~ N(0, sigma^2/n). Evaluated two independent
/// ways - a truncated-normal-moment closed form and adaptive quadrature of
/// 2 * int_c^inf (x-c)^2 dN(0, sigma^2/n) - which must agree to 1e-8
/// relative (else QuadratureFailure). Returns the closed form.
double exact_clamp_mse(double c, double sigma, std::int64_t n);

/// The quadrature route alone, exposed so tests can cross-check the pair.
double exact_clamp_mse_quadrature(double c, double sigma, std::int64_t n);

/// Closed-form route alone (truncated-normal moments).
double exact_clamp_mse_closed_form(double c, double sigma, std::int64_t n);

std::vector<BoundRow> tabulate_bounds(double c, double sigma,
                                      std::span<const std::int64_t> ns);

}  // namespace atlab
