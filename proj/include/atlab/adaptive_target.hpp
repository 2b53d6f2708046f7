#pragma once

#include "atlab/distributions.hpp"

namespace atlab {

/// The oracle triple consumed by the clamped target and the closed-form
/// mismatch/MSE expressions.
struct TargetContext {
  double mu = 0.0;     // population mean of the effect law
  double c = 0.0;      // heterogeneity margin, >= 0
  double sigma = 0.0;  // asymptotic sd of the estimator in play, > 0
};

/// min(sup - mean, mean - inf) from exact support bounds and exact mean.
/// Zero exactly when the effect law is degenerate.
double heterogeneity_margin(const EffectDistribution& dist);

/// Same, but throws DegenerateEffects when the margin is zero. Callers that
/// need effect heterogeneity go through this.
double require_heterogeneity_margin(const EffectDistribution& dist);

/// The closest point to theta_hat in [mu - c, mu + c], branching on the
/// difference theta_hat - mu. c = 0 is allowed here (the band collapses to
/// mu); this is the kernel the negative-control mode runs on.
double clamp_to_band(double theta_hat, double mu, double c);

/// The data-adaptive target: theta_hat itself inside the band, the nearer
/// band edge outside it. Throws DegenerateEffects when ctx.c <= 0.
double clamp_target(double theta_hat, const TargetContext& ctx);

/// max(0, |theta_hat - mu| - c): the per-replication adaptive error
/// magnitude |theta_hat - clamp_target(theta_hat)|.
double clamp_gap(double theta_hat, const TargetContext& ctx);

enum class TiltDirection { up, down, flat };

const char* to_string(TiltDirection d);

/// A one-parameter indicator tilt of the effect law:
///   up:   w(t) = (1 - lambda) + lambda * 1{t >= threshold}
///   down: w(t) = (1 - lambda) + lambda * 1{t <= threshold}
///   flat: w(t) = 1
/// Nonnegative by construction for lambda in [0, 1].
struct WeightingFunction {
  TiltDirection direction = TiltDirection::flat;
  double lambda = 0.0;
  double threshold = 0.0;

  double weight(double t) const {
    switch (direction) {
      case TiltDirection::up: return (1.0 - lambda) + (t >= threshold ? lambda : 0.0);
      case TiltDirection::down: return (1.0 - lambda) + (t <= threshold ? lambda : 0.0);
      case TiltDirection::flat: return 1.0;
    }
    return 1.0;
  }
};

/// Verification tolerance for a constructed weighting: machine-adjacent for
/// kinds with exact expectations, quadrature-limited otherwise.
double weighting_tolerance(const EffectDistribution& dist);

/// Builds a nonnegative weighting whose induced weighted mean
/// E[w tau]/E[w] equals m within weighting_tolerance(dist).
///
/// m must lie in [mean - c, mean + c] (else TargetOutOfRange). m == mean
/// returns the flat weighting. Interior targets bisect lambda on the
/// monotone map g(lambda) = E[w_lambda tau]/E[w_lambda] with threshold m.
/// A band endpoint that is an atom of the law returns the limiting
/// point-mass weighting (lambda = 1) exactly; an endpoint carrying zero
/// point mass is met by a limiting weighting whose threshold is solved so
/// the weighted mean sits half a tolerance inside the target. Throws
/// UnattainableBoundary if a bisection exhausts its iteration budget.
WeightingFunction construct_weights(const EffectDistribution& dist, double m);

/// E[w tau]/E[w] - m through the distributions module's expectation
/// functional, split at the indicator threshold so each integrand piece
/// stays smooth.
double verify_weighting(const EffectDistribution& dist, const WeightingFunction& w,
                        double m);

}  // namespace atlab
