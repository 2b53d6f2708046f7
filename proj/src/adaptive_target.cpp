#include "atlab/adaptive_target.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "atlab/errors.hpp"

namespace atlab {

namespace {

constexpr int kBisectionCap = 200;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double identity(double t) { return t; }

/// Weighted mean of the indicator tilt from cached tail aggregates:
/// g(lambda) = ((1-lambda) mu + lambda A) / ((1-lambda) + lambda P)
/// with A = E[tau; tail], P = P(tail). Monotone in lambda from mu to A/P.
double tilt_mean(double mu, double tail_integral, double tail_mass, double lambda) {
  const double num = (1.0 - lambda) * mu + lambda * tail_integral;
  const double den = (1.0 - lambda) + lambda * tail_mass;
  return num / den;
}

}  // namespace

double heterogeneity_margin(const EffectDistribution& dist) {
  const double mu = dist.mean();
  return std::min(dist.support_sup() - mu, mu - dist.support_inf());
}

double require_heterogeneity_margin(const EffectDistribution& dist) {
  const double c = heterogeneity_margin(dist);
  if (!(c > 0.0)) {
    throw DegenerateEffects(
        "effect heterogeneity is required here: the effect law is degenerate "
        "(heterogeneity margin c = 0)");
  }
  return c;
}

double clamp_to_band(double theta_hat, double mu, double c) {
  const double d = theta_hat - mu;
  if (d > c) return mu + c;
  if (d < -c) return mu - c;
  return theta_hat;
}

double clamp_target(double theta_hat, const TargetContext& ctx) {
  if (!(ctx.c > 0.0)) {
    throw DegenerateEffects("clamp_target requires a positive heterogeneity margin");
  }
  return clamp_to_band(theta_hat, ctx.mu, ctx.c);
}

double clamp_gap(double theta_hat, const TargetContext& ctx) {
  if (!(ctx.c > 0.0)) {
    throw DegenerateEffects("clamp_gap requires a positive heterogeneity margin");
  }
  return std::max(0.0, std::abs(theta_hat - ctx.mu) - ctx.c);
}

const char* to_string(TiltDirection d) {
  switch (d) {
    case TiltDirection::up: return "up";
    case TiltDirection::down: return "down";
    case TiltDirection::flat: return "flat";
  }
  return "unknown";
}

double weighting_tolerance(const EffectDistribution& dist) {
  return dist.has_exact_expectations() ? 1e-12 : 1e-9;
}

WeightingFunction construct_weights(const EffectDistribution& dist, double m) {
  const double c = require_heterogeneity_margin(dist);
  const double mu = dist.mean();
  const double band_lo = mu - c;
  const double band_hi = mu + c;
  if (m < band_lo || m > band_hi || !std::isfinite(m)) {
    throw TargetOutOfRange("target " + fmt(m) + " outside admissible interval [" +
                           fmt(band_lo) + ", " + fmt(band_hi) + "]");
  }
  if (m == mu) return {TiltDirection::flat, 0.0, m};

  const bool up = m > mu;
  const TiltDirection dir = up ? TiltDirection::up : TiltDirection::down;
  const double tol = weighting_tolerance(dist);

  // Band endpoint at an atom: the limiting point-mass weighting is exact.
  if (dist.kind() == EffectKind::two_point) {
    const auto& tp = dist.two_point_params();
    if ((up && m == tp.b) || (!up && m == tp.a)) {
      return {dir, 1.0, m};
    }
  }

  const double tail_mass = up ? dist.tail_mass_upper(m) : dist.tail_mass_lower(m);
  if (tail_mass > 0.0) {
    const double tail_integral =
        up ? dist.expect_upper(identity, m) : dist.expect_lower(identity, m);
    // g spans [mu, A/P] (up) or [A/P, mu] (down), so m is bracketed.
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < kBisectionCap; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double g = tilt_mean(mu, tail_integral, tail_mass, mid);
      if (std::abs(g - m) <= tol) {
        return {dir, mid, m};
      }
      if ((g < m) == up) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    throw UnattainableBoundary("weighting bisection on lambda did not converge for target " +
                               fmt(m));
  }

  // Zero point mass at the endpoint target (continuous law at a support
  // edge). No weighting attains m exactly, but mass accumulates arbitrarily
  // close to the edge, so a pure tail weighting hits any interior value:
  // solve the threshold s for a weighted mean half a tolerance inside m.
  const double interior_target = up ? m - 0.5 * tol : m + 0.5 * tol;
  double s_far = mu;  // conditional tail mean here is farthest from m
  double s_near = m;  // and approaches m as s does
  for (int iter = 0; iter < kBisectionCap; ++iter) {
    const double s = 0.5 * (s_far + s_near);
    const double mass = up ? dist.tail_mass_upper(s) : dist.tail_mass_lower(s);
    if (mass <= 0.0) {  // stepped past the support edge
      s_near = s;
      continue;
    }
    const double cond =
        (up ? dist.expect_upper(identity, s) : dist.expect_lower(identity, s)) / mass;
    if (std::abs(cond - interior_target) <= 0.25 * tol) {
      return {dir, 1.0, s};
    }
    if ((cond < interior_target) == up) {
      s_far = s;
    } else {
      s_near = s;
    }
  }
  throw UnattainableBoundary("weighting bisection on the threshold did not converge for "
                             "boundary target " +
                             fmt(m));
}

double verify_weighting(const EffectDistribution& dist, const WeightingFunction& w,
                        double m) {
  if (w.direction == TiltDirection::flat) {
    return dist.expect(identity) - m;
  }
  const bool up = w.direction == TiltDirection::up;
  const double lam = w.lambda;
  const double tail_num = up ? dist.expect_upper(identity, w.threshold)
                             : dist.expect_lower(identity, w.threshold);
  const double tail_mass =
      up ? dist.tail_mass_upper(w.threshold) : dist.tail_mass_lower(w.threshold);
  const double num = (1.0 - lam) * dist.expect(identity) + lam * tail_num;
  const double den = (1.0 - lam) + lam * tail_mass;
  if (!(den > 0.0)) {
    throw ValidationError("weighting has zero total mass");
  }
  return num / den - m;
}

}  // namespace atlab
