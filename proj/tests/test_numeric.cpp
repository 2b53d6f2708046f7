#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "atlab/errors.hpp"
#include "atlab/numeric.hpp"

using atlab::log_log_ols;
using atlab::RatePoint;
using atlab::std_normal_cdf;
using atlab::std_normal_pdf;

namespace {

// Independent high-precision oracle for the normal CDF, built on an 80-bit
// erfc: Taylor series of erf below z = 1.5, Lentz continued fraction for the
// upper incomplete gamma Q(1/2, z^2) above. Shares no code with the
// implementation under test.
long double erf_series_ld(long double z) {
  const long double sqrt_pi = sqrtl(acosl(-1.0L));
  long double term = z;
  long double sum = z;
  for (int k = 1; k < 200; ++k) {
    term *= -z * z / k;
    const long double add = term / (2 * k + 1);
    sum += add;
    if (fabsl(add) < 1e-24L * fabsl(sum)) break;
  }
  return sum * 2.0L / sqrt_pi;
}

long double erfc_ld(long double z) {
  if (z < 0.0L) return 2.0L - erfc_ld(-z);
  if (z < 1.5L) return 1.0L - erf_series_ld(z);
  // Q(1/2, z^2) = erfc(z); prefactor exp(-x + a ln x - ln Gamma(a)).
  const long double a = 0.5L;
  const long double x = z * z;
  const long double fpmin = 1e-4900L;
  long double b = x + 1.0L - a;
  long double c = 1.0L / fpmin;
  long double d = 1.0L / b;
  long double h = d;
  for (int i = 1; i < 400; ++i) {
    const long double an = -static_cast<long double>(i) * (i - a);
    b += 2.0L;
    d = an * d + b;
    if (fabsl(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (fabsl(c) < fpmin) c = fpmin;
    d = 1.0L / d;
    const long double del = d * c;
    h *= del;
    if (fabsl(del - 1.0L) < 1e-24L) break;
  }
  const long double log_sqrt_pi = 0.5L * logl(acosl(-1.0L));
  return expl(-x + a * logl(x) - log_sqrt_pi) * h;
}

long double phi_oracle(long double x) {
  const long double inv_sqrt2 = 0.70710678118654752440L;
  if (x >= 0.0L) return 1.0L - 0.5L * erfc_ld(x * inv_sqrt2);
  return 0.5L * erfc_ld(-x * inv_sqrt2);
}

// Taylor exp in long double: independent of libm exp for the pdf check.
long double exp_series_ld(long double x) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= x / k;
    sum += term;
    if (fabsl(term) < 1e-24L * fabsl(sum)) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("std_normal_cdf matches its closed-form anchors") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  // frozen from the long-double erfc oracle
  CHECK(std::abs(std_normal_cdf(-2.0) - 0.022750131948179207) <= 1e-12);
  CHECK(std::abs(std_normal_cdf(-4.0) - 3.1671241833119921e-5) <= 1e-12);
  CHECK(std_normal_cdf(-std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(std_normal_cdf(std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("std_normal_cdf tracks the independent oracle across the range") {
  // sanity of the oracle itself first
  CHECK(std::abs(static_cast<double>(phi_oracle(-2.0L)) - 0.022750131948179207) < 1e-16);
  for (int i = 0; i <= 400; ++i) {
    const double x = -10.0 + 0.05 * i;
    const double got = std_normal_cdf(x);
    const double want = static_cast<double>(phi_oracle(x));
    CHECK(std::abs(got - want) <= 1e-12);
    // the tail needs small relative error for the bound tabulations
    if (x <= -1.0) {
      CHECK(std::abs(got - want) <= 1e-13 * want + 1e-300);
    }
  }
}

TEST_CASE("std_normal_cdf reflection and monotonicity") {
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = -10.0 + 0.02 * i;
    const double up = std_normal_cdf(x);
    const double down = std_normal_cdf(-x);
    CHECK(std::abs(up + down - 1.0) <= 1e-12);
    CHECK(up >= prev);
    prev = up;
  }
}

TEST_CASE("std_normal_pdf values and symmetry") {
  CHECK(std::abs(std_normal_pdf(0.0) - 0.3989422804014327) <= 1e-15);
  CHECK(std_normal_pdf(1.7) == std_normal_pdf(-1.7));
  const double want =
      static_cast<double>(exp_series_ld(-0.5L) * 0.39894228040143267794L);
  CHECK(std::abs(std_normal_pdf(1.0) - want) <= 1e-15);
  CHECK(std::abs(std_normal_pdf(1.0) - 0.24197072451914337) <= 1e-15);
}

TEST_CASE("cdf central difference agrees with pdf") {
  const double h = 1e-5;
  for (int i = 0; i <= 120; ++i) {
    const double x = -6.0 + 0.1 * i;
    const double deriv = (std_normal_cdf(x + h) - std_normal_cdf(x - h)) / (2.0 * h);
    CHECK(std::abs(deriv - std_normal_pdf(x)) <= 1e-6);
  }
}

TEST_CASE("log_log_ols recovers exact power laws") {
  {
    const std::vector<RatePoint> pts{{10, 0.1}, {100, 0.01}, {1000, 0.001}};
    const auto fit = log_log_ols(pts);
    CHECK(std::abs(fit.slope - (-1.0)) <= 1e-12);
    CHECK(fit.residual_rms <= 1e-12);
    CHECK(fit.n_points_used == 3);
  }
  {
    const std::vector<RatePoint> pts{{10, 0.04}, {1000, 0.0004}};
    const auto fit = log_log_ols(pts);
    CHECK(std::abs(fit.slope - (-1.0)) <= 1e-12);
    CHECK(std::abs(fit.intercept - std::log(0.4)) <= 1e-12);
  }
  {
    std::vector<RatePoint> pts;
    for (std::int64_t n : {10, 20, 40, 80}) {
      pts.push_back({n, 4.0 / (static_cast<double>(n) * static_cast<double>(n))});
    }
    const auto fit = log_log_ols(pts);
    CHECK(std::abs(fit.slope - (-2.0)) <= 1e-12);
    CHECK(std::abs(fit.intercept - std::log(4.0)) <= 1e-12);
  }
}

TEST_CASE("log_log_ols recovers synthetic slopes to 1e-10") {
  const double as[] = {0.5, 3.0, 42.0};
  const double bs[] = {-2.5, -1.0, -0.5, 0.75};
  for (double a : as) {
    for (double b : bs) {
      std::vector<RatePoint> pts;
      for (std::int64_t n : {10, 20, 40, 80, 160, 320}) {
        pts.push_back({n, a * std::pow(static_cast<double>(n), b)});
      }
      const auto fit = log_log_ols(pts);
      CHECK(std::abs(fit.slope - b) <= 1e-10);
      CHECK(std::abs(fit.intercept - std::log(a)) <= 1e-10);
    }
  }
}

TEST_CASE("log_log_ols drops zero values and reports usable points") {
  const std::vector<RatePoint> pts{{10, 0.1}, {100, 0.0}, {1000, 0.001}};
  const auto fit = log_log_ols(pts);
  CHECK(fit.n_points_used == 2);
  CHECK(std::abs(fit.slope - (-1.0)) <= 1e-12);
}

TEST_CASE("log_log_ols rejects unusable inputs") {
  CHECK_THROWS_AS(log_log_ols(std::vector<RatePoint>{}), atlab::InsufficientPoints);
  CHECK_THROWS_AS(log_log_ols(std::vector<RatePoint>{{10, 0.5}}),
                  atlab::InsufficientPoints);
  CHECK_THROWS_AS(log_log_ols(std::vector<RatePoint>{{10, 0.0}, {100, 0.0}}),
                  atlab::InsufficientPoints);
  CHECK_THROWS_AS(log_log_ols(std::vector<RatePoint>{{10, 0.5}, {10, 0.25}}),
                  atlab::InsufficientPoints);
}
