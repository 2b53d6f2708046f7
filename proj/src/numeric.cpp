#include "atlab/numeric.hpp"

#include <cmath>

#include "atlab/errors.hpp"

namespace atlab {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
}  // namespace

double std_normal_cdf(double x) {
  // erfc is accurate to a few ulp across the whole tail, unlike 0.5*(1+erf).
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

RateFit log_log_ols(std::span<const RatePoint> points) {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const RatePoint& p : points) {
    if (p.value > 0.0 && p.n >= 1) {
      xs.push_back(std::log(static_cast<double>(p.n)));
      ys.push_back(std::log(p.value));
    }
  }
  const int used = static_cast<int>(xs.size());
  if (used < 2) {
    throw InsufficientPoints("log_log_ols: need at least 2 points with value > 0, got " +
                             std::to_string(used));
  }

  double x_bar = 0.0;
  double y_bar = 0.0;
  for (int i = 0; i < used; ++i) {
    x_bar += xs[i];
    y_bar += ys[i];
  }
  x_bar /= used;
  y_bar /= used;

  double sxx = 0.0;
  double sxy = 0.0;
  for (int i = 0; i < used; ++i) {
    const double dx = xs[i] - x_bar;
    sxx += dx * dx;
    sxy += dx * (ys[i] - y_bar);
  }
  if (sxx == 0.0) {
    throw InsufficientPoints("log_log_ols: all usable points share the same n");
  }

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_bar - fit.slope * x_bar;
  fit.n_points_used = used;

  double ss_res = 0.0;
  for (int i = 0; i < used; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.residual_rms = std::sqrt(ss_res / used);
  return fit;
}

}  // namespace atlab
