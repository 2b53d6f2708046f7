#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "atlab/rng.hpp"

namespace atlab {

enum class EffectKind { two_point, uniform, scaled_beta, degenerate };

/// Converts a kind to its configuration-file spelling.
const char* to_string(EffectKind kind);

/// A bounded-support law for the effect variable (also reused for the
/// control-arm baseline). Mean, variance, and support bounds are exact
/// closed forms; only bounded supports are admitted so the heterogeneity
/// margin downstream is exact rather than estimated.
class EffectDistribution {
 public:
  struct TwoPointParams {
    double a = 0.0;  // lower atom
    double b = 0.0;  // upper atom, a < b
    double p = 0.0;  // mass on b, in (0,1)
  };
  struct UniformParams {
    double lo = 0.0;
    double hi = 0.0;
  };
  struct ScaledBetaParams {
    double alpha = 0.0;
    double beta = 0.0;
    double lo = 0.0;  // affine image of [0,1]
    double hi = 0.0;
  };
  struct DegenerateParams {
    double value = 0.0;
  };

  static EffectDistribution two_point(double a, double b, double p);
  static EffectDistribution uniform(double lo, double hi);
  static EffectDistribution scaled_beta(double alpha, double beta, double lo, double hi);
  static EffectDistribution degenerate(double value);

  EffectKind kind() const { return kind_; }

  double mean() const;
  double variance() const;
  double support_inf() const;
  double support_sup() const;

  /// True when expectations are finite sums (two_point, degenerate), so
  /// downstream tolerances can be machine-precision rather than quadrature.
  bool has_exact_expectations() const;

  /// One draw; always lies in [support_inf, support_sup]. scaled_beta draws
  /// invert the regularized incomplete beta CDF by bisection, which keeps
  /// the draw a pure function of the stream (no rejection steps).
  double sample(RngStream& rng) const;

  /// E[f(tau)]. Exact summation for atomic kinds; tanh-sinh quadrature with
  /// absolute tolerance 1e-10 otherwise. Throws QuadratureFailure if the
  /// tolerance is not certified within the refinement budget.
  double expect(const std::function<double(double)>& f) const;

  /// E[f(tau) * 1{tau >= t}] and E[f(tau) * 1{tau <= t}]. Splitting the
  /// integral at t keeps indicator-weighted integrands smooth on the piece
  /// that is actually integrated.
  double expect_upper(const std::function<double(double)>& f, double t) const;
  double expect_lower(const std::function<double(double)>& f, double t) const;

  /// P(tau >= t) / P(tau <= t); exact for atomic kinds.
  double tail_mass_upper(double t) const;
  double tail_mass_lower(double t) const;

  const TwoPointParams& two_point_params() const;
  const UniformParams& uniform_params() const;
  const ScaledBetaParams& scaled_beta_params() const;
  const DegenerateParams& degenerate_params() const;

 private:
  EffectDistribution() = default;

  EffectKind kind_ = EffectKind::degenerate;
  TwoPointParams tp_;
  UniformParams un_;
  ScaledBetaParams sb_;
  DegenerateParams dg_;
  double sb_log_norm_ = 0.0;  // log Beta(alpha, beta), cached for the sampler
};

/// The data-generating process: Y(0) ~ baseline, tau ~ effect independent
/// of Y(0), Y(1) = Y(0) + tau, treatment assigned iid Bernoulli(p).
struct PopulationSpec {
  EffectDistribution baseline = EffectDistribution::degenerate(0.0);
  EffectDistribution effect = EffectDistribution::degenerate(0.0);
  double assignment_prob = 0.5;
};

/// Validates 0 < assignment_prob < 1; throws ValidationError otherwise.
void validate(const PopulationSpec& pop);

/// One realized experiment of n units. tau_latent is retained for the
/// oracle estimator and diagnostics; y_obs[i] = y0[i] + z[i] * tau_latent[i].
struct Sample {
  std::int64_t n = 0;
  std::vector<double> y_obs;
  std::vector<std::uint8_t> z;
  std::vector<double> tau_latent;
};

/// Draws a sample of size n. Per unit the stream is consumed in a fixed
/// order (baseline, effect, assignment), so identical (pop, n, stream)
/// give byte-identical samples.
Sample draw_sample(const PopulationSpec& pop, std::int64_t n, RngStream& rng);

}  // namespace atlab
