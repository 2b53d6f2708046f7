#include "atlab/bounds.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "atlab/errors.hpp"
#include "atlab/numeric.hpp"

namespace atlab {

namespace {

constexpr double kSqrt2OverPi = 0.7978845608028653558798921198687637;
constexpr double kDualRouteRelTol = 1e-8;

void require_positive(double c, double sigma) {
  if (!(c > 0.0) || !(sigma > 0.0)) {
    throw ValidationError("bounds require c > 0 and sigma > 0");
  }
}

}  // namespace

double mismatch_probability(double c, double sigma, std::int64_t n) {
  require_positive(c, sigma);
  const double root_n = std::sqrt(static_cast<double>(n));
  return 2.0 * std_normal_cdf(-c * root_n / sigma);
}

double mse_upper_bound(double c, double sigma, std::int64_t n) {
  require_positive(c, sigma);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double a = c * root_n / sigma;
  const double first = c * sigma * kSqrt2OverPi * std::exp(-0.5 * a * a) / root_n;
  const double second = 2.0 * sigma * sigma * std_normal_cdf(-a) / static_cast<double>(n);
  return first + second;
}

double exact_clamp_mse_closed_form(double c, double sigma, std::int64_t n) {
  require_positive(c, sigma);
  // With X ~ N(0, s^2), s = sigma/sqrt(n), a = c/s:
  //   E[max(0, |X| - c)^2] = 2 [ (s^2 + c^2) Phi(-a) - s c phi(a) ]
  // from int_a^inf phi = Phi(-a), int_a^inf t phi = phi(a),
  // int_a^inf t^2 phi = Phi(-a) + a phi(a).
  const double s = sigma / std::sqrt(static_cast<double>(n));
  const double a = c / s;
  return 2.0 * ((s * s + c * c) * std_normal_cdf(-a) - s * c * std_normal_pdf(a));
}

double exact_clamp_mse_quadrature(double c, double sigma, std::int64_t n) {
  require_positive(c, sigma);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double scale = root_n / (sigma * 2.5066282746310005024157652848110453);  // sqrt(2 pi)
  const double inv_two_s2 = static_cast<double>(n) / (2.0 * sigma * sigma);
  const auto integrand = [&](double x) {
    const double d = x - c;
    return d * d * scale * std::exp(-x * x * inv_two_s2);
  };
  double error = 0.0;
  double result = 0.0;
  try {
    result = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, c, std::numeric_limits<double>::infinity(), 12, 1e-10, &error);
  } catch (const std::exception& e) {
    throw QuadratureFailure(std::string("clamp MSE quadrature failed: ") + e.what());
  }
  return 2.0 * result;
}

double exact_clamp_mse(double c, double sigma, std::int64_t n) {
  const double closed = exact_clamp_mse_closed_form(c, sigma, n);
  const double quad = exact_clamp_mse_quadrature(c, sigma, n);
  // Deep in the tail both routes underflow together; the additive floor
  // keeps the check meaningful without tripping on denormals.
  const double scale = std::max(std::abs(closed), std::abs(quad));
  if (std::abs(closed - quad) > kDualRouteRelTol * scale + 1e-300) {
    throw QuadratureFailure("clamp MSE routes disagree: closed form " +
                            std::to_string(closed) + " vs quadrature " +
                            std::to_string(quad));
  }
  return closed;
}

std::vector<BoundRow> tabulate_bounds(double c, double sigma,
                                      std::span<const std::int64_t> ns) {
  std::vector<BoundRow> rows;
  rows.reserve(ns.size());
  for (std::int64_t n : ns) {
    BoundRow row;
    row.n = n;
    row.mismatch_prob = mismatch_probability(c, sigma, n);
    row.mse_bound = mse_upper_bound(c, sigma, n);
    row.n_times_bound = static_cast<double>(n) * row.mse_bound;
    row.exact_mse = exact_clamp_mse(c, sigma, n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace atlab
