#include "atlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "atlab/errors.hpp"

namespace atlab {

namespace {

constexpr double kQuadAbsTol = 1e-10;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(what) + " must be finite");
  }
}

/// Definite integral with an absolute error certificate. tanh-sinh copes
/// with the integrable endpoint singularities of beta densities with
/// shape parameters below 1.
double integrate_abs(const std::function<double(double)>& f, double a, double b,
                     double abs_tol) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  double result = 0.0;
  try {
    result = integrator.integrate(f, a, b, 1e-12, &err, &l1, &levels);
  } catch (const std::exception& e) {
    throw QuadratureFailure(std::string("quadrature evaluation failed: ") + e.what());
  }
  // err is the absolute difference between the last two refinement levels.
  if (!std::isfinite(result) || err > abs_tol) {
    throw QuadratureFailure("quadrature did not certify absolute tolerance " +
                            std::to_string(abs_tol));
  }
  return result;
}

double beta_log_norm(double alpha, double beta) {
  return std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
}

/// Density of Beta(alpha, beta) on (0,1).
double beta_pdf01(double alpha, double beta, double x) {
  if (x <= 0.0 || x >= 1.0) {
    // endpoints are only reachable in the limit; the quadrature never
    // evaluates exactly there, and atoms carry no mass for this kind
    if ((x == 0.0 && alpha > 1.0) || (x == 1.0 && beta > 1.0)) return 0.0;
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::exp((alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) -
                  beta_log_norm(alpha, beta));
}

/// Inverse of the regularized incomplete beta CDF: a bracketed bisection
/// with Newton acceleration (steps falling outside the bracket fall back to
/// the midpoint). Monotone and bracketed, so the result is a pure function
/// of u regardless of scheduling.
double beta_inv_cdf(double alpha, double beta, double log_norm, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = boost::math::ibeta(alpha, beta, x) - u;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (std::abs(f) <= 1e-14 || hi - lo <= 1e-14) break;
    const double density =
        std::exp((alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) - log_norm);
    double next = 0.5 * (lo + hi);
    if (density > 0.0 && std::isfinite(density)) {
      const double newton = x - f / density;
      if (newton > lo && newton < hi) next = newton;
    }
    x = next;
  }
  return x;
}

}  // namespace

const char* to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::two_point: return "two_point";
    case EffectKind::uniform: return "uniform";
    case EffectKind::scaled_beta: return "scaled_beta";
    case EffectKind::degenerate: return "degenerate";
  }
  return "unknown";
}

EffectDistribution EffectDistribution::two_point(double a, double b, double p) {
  require_finite(a, "two_point.a");
  require_finite(b, "two_point.b");
  require_finite(p, "two_point.p");
  if (!(a < b)) throw ValidationError("two_point requires a < b");
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("two_point requires p in (0,1); use degenerate for a point mass");
  }
  EffectDistribution d;
  d.kind_ = EffectKind::two_point;
  d.tp_ = {a, b, p};
  return d;
}

EffectDistribution EffectDistribution::uniform(double lo, double hi) {
  require_finite(lo, "uniform.lo");
  require_finite(hi, "uniform.hi");
  if (!(lo < hi)) throw ValidationError("uniform requires lo < hi");
  EffectDistribution d;
  d.kind_ = EffectKind::uniform;
  d.un_ = {lo, hi};
  return d;
}

EffectDistribution EffectDistribution::scaled_beta(double alpha, double beta, double lo,
                                                   double hi) {
  require_finite(alpha, "scaled_beta.alpha");
  require_finite(beta, "scaled_beta.beta");
  require_finite(lo, "scaled_beta.lo");
  require_finite(hi, "scaled_beta.hi");
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw ValidationError("scaled_beta requires alpha > 0 and beta > 0");
  }
  if (!(lo < hi)) throw ValidationError("scaled_beta requires lo < hi");
  EffectDistribution d;
  d.kind_ = EffectKind::scaled_beta;
  d.sb_ = {alpha, beta, lo, hi};
  d.sb_log_norm_ = beta_log_norm(alpha, beta);
  return d;
}

EffectDistribution EffectDistribution::degenerate(double value) {
  require_finite(value, "degenerate.value");
  EffectDistribution d;
  d.kind_ = EffectKind::degenerate;
  d.dg_ = {value};
  return d;
}

double EffectDistribution::mean() const {
  switch (kind_) {
    case EffectKind::two_point: return (1.0 - tp_.p) * tp_.a + tp_.p * tp_.b;
    case EffectKind::uniform: return 0.5 * (un_.lo + un_.hi);
    case EffectKind::scaled_beta:
      return sb_.lo + (sb_.hi - sb_.lo) * sb_.alpha / (sb_.alpha + sb_.beta);
    case EffectKind::degenerate: return dg_.value;
  }
  return 0.0;
}

double EffectDistribution::variance() const {
  switch (kind_) {
    case EffectKind::two_point: {
      const double d = tp_.b - tp_.a;
      return d * d * tp_.p * (1.0 - tp_.p);
    }
    case EffectKind::uniform: {
      const double d = un_.hi - un_.lo;
      return d * d / 12.0;
    }
    case EffectKind::scaled_beta: {
      const double d = sb_.hi - sb_.lo;
      const double s = sb_.alpha + sb_.beta;
      return d * d * sb_.alpha * sb_.beta / (s * s * (s + 1.0));
    }
    case EffectKind::degenerate: return 0.0;
  }
  return 0.0;
}

double EffectDistribution::support_inf() const {
  switch (kind_) {
    case EffectKind::two_point: return tp_.a;
    case EffectKind::uniform: return un_.lo;
    case EffectKind::scaled_beta: return sb_.lo;
    case EffectKind::degenerate: return dg_.value;
  }
  return 0.0;
}

double EffectDistribution::support_sup() const {
  switch (kind_) {
    case EffectKind::two_point: return tp_.b;
    case EffectKind::uniform: return un_.hi;
    case EffectKind::scaled_beta: return sb_.hi;
    case EffectKind::degenerate: return dg_.value;
  }
  return 0.0;
}

bool EffectDistribution::has_exact_expectations() const {
  return kind_ == EffectKind::two_point || kind_ == EffectKind::degenerate;
}

double EffectDistribution::sample(RngStream& rng) const {
  switch (kind_) {
    case EffectKind::two_point:
      return rng.next_double() < tp_.p ? tp_.b : tp_.a;
    case EffectKind::uniform:
      return un_.lo + rng.next_double() * (un_.hi - un_.lo);
    case EffectKind::scaled_beta: {
      const double x = beta_inv_cdf(sb_.alpha, sb_.beta, sb_log_norm_,
                                    rng.next_double());
      return sb_.lo + (sb_.hi - sb_.lo) * x;
    }
    case EffectKind::degenerate:
      return dg_.value;
  }
  return 0.0;
}

double EffectDistribution::expect(const std::function<double(double)>& f) const {
  switch (kind_) {
    case EffectKind::two_point:
      return (1.0 - tp_.p) * f(tp_.a) + tp_.p * f(tp_.b);
    case EffectKind::uniform: {
      const double width = un_.hi - un_.lo;
      return integrate_abs([&](double x) { return f(x) / width; }, un_.lo, un_.hi,
                           kQuadAbsTol);
    }
    case EffectKind::scaled_beta: {
      const double lo = sb_.lo;
      const double span = sb_.hi - sb_.lo;
      return integrate_abs(
          [&](double x) { return f(lo + span * x) * beta_pdf01(sb_.alpha, sb_.beta, x); },
          0.0, 1.0, kQuadAbsTol);
    }
    case EffectKind::degenerate:
      return f(dg_.value);
  }
  return 0.0;
}

double EffectDistribution::expect_upper(const std::function<double(double)>& f,
                                        double t) const {
  switch (kind_) {
    case EffectKind::two_point: {
      double acc = 0.0;
      if (tp_.a >= t) acc += (1.0 - tp_.p) * f(tp_.a);
      if (tp_.b >= t) acc += tp_.p * f(tp_.b);
      return acc;
    }
    case EffectKind::uniform: {
      const double a = std::max(t, un_.lo);
      if (a >= un_.hi) return 0.0;
      const double width = un_.hi - un_.lo;
      return integrate_abs([&](double x) { return f(x) / width; }, a, un_.hi, kQuadAbsTol);
    }
    case EffectKind::scaled_beta: {
      const double lo = sb_.lo;
      const double span = sb_.hi - sb_.lo;
      const double a01 = std::clamp((t - lo) / span, 0.0, 1.0);
      if (a01 >= 1.0) return 0.0;
      return integrate_abs(
          [&](double x) { return f(lo + span * x) * beta_pdf01(sb_.alpha, sb_.beta, x); },
          a01, 1.0, kQuadAbsTol);
    }
    case EffectKind::degenerate:
      return dg_.value >= t ? f(dg_.value) : 0.0;
  }
  return 0.0;
}

double EffectDistribution::expect_lower(const std::function<double(double)>& f,
                                        double t) const {
  switch (kind_) {
    case EffectKind::two_point: {
      double acc = 0.0;
      if (tp_.a <= t) acc += (1.0 - tp_.p) * f(tp_.a);
      if (tp_.b <= t) acc += tp_.p * f(tp_.b);
      return acc;
    }
    case EffectKind::uniform: {
      const double b = std::min(t, un_.hi);
      if (b <= un_.lo) return 0.0;
      const double width = un_.hi - un_.lo;
      return integrate_abs([&](double x) { return f(x) / width; }, un_.lo, b, kQuadAbsTol);
    }
    case EffectKind::scaled_beta: {
      const double lo = sb_.lo;
      const double span = sb_.hi - sb_.lo;
      const double b01 = std::clamp((t - lo) / span, 0.0, 1.0);
      if (b01 <= 0.0) return 0.0;
      return integrate_abs(
          [&](double x) { return f(lo + span * x) * beta_pdf01(sb_.alpha, sb_.beta, x); },
          0.0, b01, kQuadAbsTol);
    }
    case EffectKind::degenerate:
      return dg_.value <= t ? f(dg_.value) : 0.0;
  }
  return 0.0;
}

double EffectDistribution::tail_mass_upper(double t) const {
  switch (kind_) {
    case EffectKind::two_point: {
      double acc = 0.0;
      if (tp_.a >= t) acc += 1.0 - tp_.p;
      if (tp_.b >= t) acc += tp_.p;
      return acc;
    }
    case EffectKind::uniform: {
      const double a = std::max(t, un_.lo);
      return a >= un_.hi ? 0.0 : (un_.hi - a) / (un_.hi - un_.lo);
    }
    case EffectKind::scaled_beta: {
      const double x = std::clamp((t - sb_.lo) / (sb_.hi - sb_.lo), 0.0, 1.0);
      if (x >= 1.0) return 0.0;
      if (x <= 0.0) return 1.0;
      return boost::math::ibetac(sb_.alpha, sb_.beta, x);
    }
    case EffectKind::degenerate:
      return dg_.value >= t ? 1.0 : 0.0;
  }
  return 0.0;
}

double EffectDistribution::tail_mass_lower(double t) const {
  switch (kind_) {
    case EffectKind::two_point: {
      double acc = 0.0;
      if (tp_.a <= t) acc += 1.0 - tp_.p;
      if (tp_.b <= t) acc += tp_.p;
      return acc;
    }
    case EffectKind::uniform: {
      const double b = std::min(t, un_.hi);
      return b <= un_.lo ? 0.0 : (b - un_.lo) / (un_.hi - un_.lo);
    }
    case EffectKind::scaled_beta: {
      const double x = std::clamp((t - sb_.lo) / (sb_.hi - sb_.lo), 0.0, 1.0);
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(sb_.alpha, sb_.beta, x);
    }
    case EffectKind::degenerate:
      return dg_.value <= t ? 1.0 : 0.0;
  }
  return 0.0;
}

const EffectDistribution::TwoPointParams& EffectDistribution::two_point_params() const {
  if (kind_ != EffectKind::two_point) throw Error("not a two_point distribution");
  return tp_;
}

const EffectDistribution::UniformParams& EffectDistribution::uniform_params() const {
  if (kind_ != EffectKind::uniform) throw Error("not a uniform distribution");
  return un_;
}

const EffectDistribution::ScaledBetaParams& EffectDistribution::scaled_beta_params() const {
  if (kind_ != EffectKind::scaled_beta) throw Error("not a scaled_beta distribution");
  return sb_;
}

const EffectDistribution::DegenerateParams& EffectDistribution::degenerate_params() const {
  if (kind_ != EffectKind::degenerate) throw Error("not a degenerate distribution");
  return dg_;
}

void validate(const PopulationSpec& pop) {
  if (!(pop.assignment_prob > 0.0 && pop.assignment_prob < 1.0)) {
    throw ValidationError("assignment_prob must lie strictly between 0 and 1");
  }
}

Sample draw_sample(const PopulationSpec& pop, std::int64_t n, RngStream& rng) {
  Sample s;
  s.n = n;
  s.y_obs.resize(static_cast<std::size_t>(n));
  s.z.resize(static_cast<std::size_t>(n));
  s.tau_latent.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double y0 = pop.baseline.sample(rng);
    const double tau = pop.effect.sample(rng);
    const bool treated = rng.next_bernoulli(pop.assignment_prob);
    s.tau_latent[static_cast<std::size_t>(i)] = tau;
    s.z[static_cast<std::size_t>(i)] = treated ? 1 : 0;
    s.y_obs[static_cast<std::size_t>(i)] = treated ? y0 + tau : y0;
  }
  return s;
}

}  // namespace atlab
