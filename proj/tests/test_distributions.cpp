#include <cmath>
#include <vector>

#include <doctest.h>

#include "atlab/distributions.hpp"
#include "atlab/errors.hpp"
#include "atlab/rng.hpp"

using atlab::draw_sample;
using atlab::EffectDistribution;
using atlab::PopulationSpec;
using atlab::RngStream;
using atlab::Sample;

namespace {

const EffectDistribution kTwoPoint = EffectDistribution::two_point(0.0, 2.0, 0.5);
const EffectDistribution kUnit = EffectDistribution::uniform(0.0, 1.0);
const EffectDistribution kBeta23 = EffectDistribution::scaled_beta(2.0, 3.0, 0.0, 1.0);
const EffectDistribution kBeta22 = EffectDistribution::scaled_beta(2.0, 2.0, 0.0, 1.0);
const EffectDistribution kPoint = EffectDistribution::degenerate(1.5);

// Midpoint-rule oracle for beta-law moments; deliberately naive and
// independent of the quadrature used by the implementation.
double riemann_beta_moment(double alpha, double beta, int power, int cells) {
  const double log_norm =
      std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  double acc = 0.0;
  const double h = 1.0 / cells;
  for (int i = 0; i < cells; ++i) {
    const double x = (i + 0.5) * h;
    const double pdf =
        std::exp((alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) - log_norm);
    acc += std::pow(x, power) * pdf * h;
  }
  return acc;
}

}  // namespace

TEST_CASE("closed-form means") {
  CHECK(kTwoPoint.mean() == 1.0);
  CHECK(kUnit.mean() == 0.5);
  CHECK(std::abs(kBeta23.mean() - 0.4) <= 1e-15);
  CHECK(kPoint.mean() == 1.5);
  // alpha/(alpha+beta) against the dense-grid oracle
  CHECK(std::abs(riemann_beta_moment(2.0, 3.0, 1, 2000000) - 0.4) <= 1e-7);
}

TEST_CASE("support bounds") {
  CHECK(kTwoPoint.support_inf() == 0.0);
  CHECK(kTwoPoint.support_sup() == 2.0);
  const auto wide = EffectDistribution::uniform(-1.0, 3.0);
  CHECK(wide.support_inf() == -1.0);
  CHECK(wide.support_sup() == 3.0);
  CHECK(kPoint.support_inf() == 1.5);
  CHECK(kPoint.support_sup() == 1.5);
}

TEST_CASE("closed-form variances") {
  CHECK(kTwoPoint.variance() == 1.0);
  CHECK(std::abs(kUnit.variance() - 1.0 / 12.0) <= 1e-16);
  // beta(2,3): ab/((a+b)^2 (a+b+1)) = 6/150
  CHECK(std::abs(kBeta23.variance() - 0.04) <= 1e-15);
  CHECK(kPoint.variance() == 0.0);
  const double m2 = riemann_beta_moment(2.0, 3.0, 2, 2000000);
  CHECK(std::abs((m2 - 0.16) - kBeta23.variance()) <= 1e-6);
}

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(EffectDistribution::two_point(2.0, 0.0, 0.5), atlab::ValidationError);
  CHECK_THROWS_AS(EffectDistribution::two_point(0.0, 2.0, 0.0), atlab::ValidationError);
  CHECK_THROWS_AS(EffectDistribution::two_point(0.0, 2.0, 1.0), atlab::ValidationError);
  CHECK_THROWS_AS(EffectDistribution::uniform(1.0, 1.0), atlab::ValidationError);
  CHECK_THROWS_AS(EffectDistribution::scaled_beta(0.0, 1.0, 0.0, 1.0),
                  atlab::ValidationError);
  CHECK_THROWS_AS(EffectDistribution::scaled_beta(1.0, 1.0, 2.0, 1.0),
                  atlab::ValidationError);
  CHECK_THROWS_AS(EffectDistribution::degenerate(std::nan("")), atlab::ValidationError);
  PopulationSpec pop;
  pop.assignment_prob = 0.0;
  CHECK_THROWS_AS(atlab::validate(pop), atlab::ValidationError);
}

TEST_CASE("sampling is deterministic in the stream seed") {
  for (const auto& dist : {kTwoPoint, kUnit, kBeta23, kPoint}) {
    RngStream a(12345);
    RngStream b(12345);
    for (int i = 0; i < 32; ++i) {
      CHECK(dist.sample(a) == dist.sample(b));
    }
  }
}

TEST_CASE("draws stay inside the support") {
  for (const auto& dist : {kTwoPoint, kUnit, kBeta23, kBeta22, kPoint}) {
    RngStream rng(7);
    for (int i = 0; i < 20000; ++i) {
      const double t = dist.sample(rng);
      CHECK(t >= dist.support_inf());
      CHECK(t <= dist.support_sup());
    }
  }
}

TEST_CASE("degenerate draws are the point mass") {
  RngStream rng(99);
  for (int i = 0; i < 100; ++i) CHECK(kPoint.sample(rng) == 1.5);
}

TEST_CASE("Monte Carlo means converge at the binomial rate" * doctest::timeout(120)) {
  const int reps = 1000000;
  int seed = 1000;
  for (const auto& dist : {kTwoPoint, kUnit, kBeta23, kPoint}) {
    RngStream rng(seed++);
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) acc += dist.sample(rng);
    const double mc_mean = acc / reps;
    const double tol = 5.0 * std::sqrt(dist.variance()) / 1000.0;
    CHECK(std::abs(mc_mean - dist.mean()) <= tol + 1e-12);
  }
}

TEST_CASE("uniform lower-quartile frequency") {
  RngStream rng(5150);
  const int reps = 1000000;
  int below = 0;
  for (int i = 0; i < reps; ++i) {
    if (kUnit.sample(rng) < 0.25) ++below;
  }
  const double frac = static_cast<double>(below) / reps;
  CHECK(std::abs(frac - 0.25) <= 4.0 * std::sqrt(0.25 * 0.75 / reps));
}

TEST_CASE("expect: exact sums and quadrature moments") {
  CHECK(kTwoPoint.expect([](double t) { return t; }) == 1.0);
  CHECK(std::abs(kUnit.expect([](double t) { return t * t; }) - 1.0 / 3.0) <= 1e-10);
  // second raw moment a(a+1)/((a+b)(a+b+1)) = 0.3 for beta(2,2)
  CHECK(std::abs(kBeta22.expect([](double t) { return t * t; }) - 0.3) <= 1e-10);
  CHECK(std::abs(riemann_beta_moment(2.0, 2.0, 2, 2000000) - 0.3) <= 1e-7);
  CHECK(kPoint.expect([](double t) { return t * t; }) == 2.25);
}

TEST_CASE("expect with the identity reproduces the mean") {
  for (const auto& dist : {kTwoPoint, kUnit, kBeta23, kBeta22, kPoint}) {
    CHECK(std::abs(dist.expect([](double t) { return t; }) - dist.mean()) <= 1e-10);
  }
}

TEST_CASE("expect flags non-integrable integrands") {
  CHECK_THROWS_AS(kUnit.expect([](double t) { return 1.0 / t; }),
                  atlab::QuadratureFailure);
}

TEST_CASE("tail expectations split the law consistently") {
  for (const auto& dist : {kTwoPoint, kUnit, kBeta23}) {
    const auto identity = [](double t) { return t; };
    for (double t : {0.1, 0.4, 0.9}) {
      const double lo = dist.expect_lower(identity, t);
      const double hi = dist.expect_upper(identity, t);
      // atoms at the split point would be double counted; these t avoid them
      CHECK(std::abs(lo + hi - dist.mean()) <= 1e-9);
      CHECK(std::abs(dist.tail_mass_lower(t) + dist.tail_mass_upper(t) - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("draw_sample: deterministic potential outcomes") {
  PopulationSpec pop;
  pop.baseline = EffectDistribution::degenerate(0.0);
  pop.effect = EffectDistribution::degenerate(1.0);
  pop.assignment_prob = 0.5;
  RngStream rng(11);
  const Sample s = draw_sample(pop, 4, rng);
  REQUIRE(s.y_obs.size() == 4);
  REQUIRE(s.z.size() == 4);
  REQUIRE(s.tau_latent.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(s.y_obs[i] == static_cast<double>(s.z[i]));
  }
}

TEST_CASE("draw_sample: latent effects contained in the effect support") {
  PopulationSpec pop;
  pop.baseline = kUnit;
  pop.effect = kTwoPoint;
  pop.assignment_prob = 0.3;
  RngStream rng(21);
  const Sample s = draw_sample(pop, 500, rng);
  for (double t : s.tau_latent) {
    CHECK(t >= pop.effect.support_inf());
    CHECK(t <= pop.effect.support_sup());
  }
}

TEST_CASE("draw_sample: identical for identical seeds") {
  PopulationSpec pop;
  pop.baseline = kUnit;
  pop.effect = kBeta23;
  pop.assignment_prob = 0.5;
  RngStream a(77);
  RngStream b(77);
  const Sample sa = draw_sample(pop, 64, a);
  const Sample sb = draw_sample(pop, 64, b);
  CHECK(sa.y_obs == sb.y_obs);
  CHECK(sa.z == sb.z);
  CHECK(sa.tau_latent == sb.tau_latent);
}
