#include <cmath>
#include <vector>

#include <doctest.h>

#include "atlab/distributions.hpp"
#include "atlab/errors.hpp"
#include "atlab/estimators.hpp"
#include "atlab/numeric.hpp"
#include "atlab/rng.hpp"

using namespace atlab;

namespace {

Sample make_sample(std::vector<double> y, std::vector<std::uint8_t> z,
                   std::vector<double> tau) {
  Sample s;
  s.n = static_cast<std::int64_t>(y.size());
  s.y_obs = std::move(y);
  s.z = std::move(z);
  s.tau_latent = std::move(tau);
  return s;
}

PopulationSpec standard_population() {
  PopulationSpec pop;
  pop.baseline = EffectDistribution::uniform(0.0, 1.0);
  pop.effect = EffectDistribution::two_point(0.0, 2.0, 0.5);
  pop.assignment_prob = 0.5;
  return pop;
}

// sqrt((1/12 + 1)/0.5 + (1/12)/0.5) = sqrt(7/3); frozen from the plug-in of
// exact variances and cross-checked by Monte Carlo below.
constexpr double kStandardDimSd = 1.5275252316519468;

}  // namespace

TEST_CASE("oracle_tau_mean averages the latent effects") {
  const Sample s = make_sample({0, 0, 0, 0}, {0, 1, 1, 0}, {0.0, 2.0, 2.0, 0.0});
  RngStream rng(1);
  const Estimate e = estimate({EstimatorTag::oracle_tau_mean, 0.0}, s, 0.0, rng);
  CHECK(e.theta_hat == 1.0);
  // sample sd of {0,2,2,0} is sqrt(4/3)
  CHECK(std::abs(e.sigma_hat - std::sqrt(4.0 / 3.0)) <= 1e-15);
}

TEST_CASE("difference_in_means subtracts arm means") {
  const Sample s = make_sample({3, 5, 1, 1}, {1, 1, 0, 0}, {2, 2, 2, 2});
  RngStream rng(1);
  const Estimate e = estimate({EstimatorTag::difference_in_means, 0.0}, s, 0.0, rng);
  CHECK(e.theta_hat == 3.0);
}

TEST_CASE("difference_in_means rejects empty arms") {
  const Sample all_treated = make_sample({1, 2}, {1, 1}, {0, 0});
  const Sample all_control = make_sample({1, 2}, {0, 0}, {0, 0});
  RngStream rng(1);
  CHECK_THROWS_AS(estimate({EstimatorTag::difference_in_means, 0.0}, all_treated, 0.0, rng),
                  EmptyArm);
  CHECK_THROWS_AS(estimate({EstimatorTag::difference_in_means, 0.0}, all_control, 0.0, rng),
                  EmptyArm);
}

TEST_CASE("synthetic estimator with zero noise returns the mean") {
  const Estimate e = synthetic_estimate(1.0, 1.0, 4, 0.0);
  CHECK(e.theta_hat == 1.0);
  CHECK(e.sigma_hat == 1.0);
}

TEST_CASE("synthetic estimator scales noise by sigma over root n") {
  const Estimate e = synthetic_estimate(2.0, 3.0, 9, 1.0);
  CHECK(std::abs(e.theta_hat - 3.0) <= 1e-15);
}

TEST_CASE("unbiasedness at desk scale" * doctest::timeout(120)) {
  const PopulationSpec pop = standard_population();
  const double mu = pop.effect.mean();
  const int reps = 100000;

  SUBCASE("oracle_tau_mean") {
    const std::int64_t n = 16;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      RngStream rng(mix64(9000 + static_cast<std::uint64_t>(r)));
      const Sample s = draw_sample(pop, n, rng);
      acc += estimate({EstimatorTag::oracle_tau_mean, 0.0}, s, mu, rng).theta_hat;
    }
    const double sigma = asymptotic_sd(pop, {EstimatorTag::oracle_tau_mean, 0.0});
    const double tol = 4.0 * sigma / std::sqrt(static_cast<double>(n) * reps);
    CHECK(std::abs(acc / reps - mu) <= tol);
  }

  SUBCASE("synthetic_normal") {
    const std::int64_t n = 4;
    const double sigma = 1.0;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      RngStream rng(mix64(77000 + static_cast<std::uint64_t>(r)));
      acc += synthetic_estimate(mu, sigma, n, rng.next_normal()).theta_hat;
    }
    const double tol = 4.0 * sigma / std::sqrt(static_cast<double>(n) * reps);
    CHECK(std::abs(acc / reps - mu) <= tol);
  }
}

TEST_CASE("synthetic estimator is exactly normal: 99-bin uniformity" *
          doctest::timeout(60)) {
  const double mu = 1.0;
  const double sigma = 1.0;
  const std::int64_t n = 7;
  const int reps = 100000;
  const int bins = 99;
  std::vector<int> counts(bins, 0);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int r = 0; r < reps; ++r) {
    RngStream rng(mix64(31000 + static_cast<std::uint64_t>(r)));
    const double theta = synthetic_estimate(mu, sigma, n, rng.next_normal()).theta_hat;
    const double u = std_normal_cdf(root_n * (theta - mu) / sigma);
    int bin = static_cast<int>(u * bins);
    if (bin == bins) bin = bins - 1;
    ++counts[bin];
  }
  const double expected = static_cast<double>(reps) / bins;
  const double bin_sd = std::sqrt(reps * (1.0 / bins) * (1.0 - 1.0 / bins));
  for (int b = 0; b < bins; ++b) {
    CHECK(std::abs(counts[b] - expected) <= 5.0 * bin_sd);
  }
}

TEST_CASE("asymptotic sd closed forms") {
  const PopulationSpec pop = standard_population();
  CHECK(asymptotic_sd(pop, {EstimatorTag::oracle_tau_mean, 0.0}) == 1.0);
  CHECK(std::abs(asymptotic_sd(pop, {EstimatorTag::difference_in_means, 0.0}) -
                 kStandardDimSd) <= 1e-15);
  CHECK(asymptotic_sd(pop, {EstimatorTag::synthetic_normal, 2.0}) == 2.0);

  PopulationSpec flat = pop;
  flat.effect = EffectDistribution::degenerate(1.0);
  CHECK_THROWS_AS(asymptotic_sd(flat, {EstimatorTag::oracle_tau_mean, 0.0}),
                  DegenerateVariance);
}

TEST_CASE("difference-in-means sd matches the Monte Carlo scale" *
          doctest::timeout(120)) {
  const PopulationSpec pop = standard_population();
  const double mu = pop.effect.mean();
  const std::int64_t n = 10000;
  const int reps = 4000;
  const double root_n = std::sqrt(static_cast<double>(n));
  double acc = 0.0;
  double acc_sq = 0.0;
  double sigma_hat_acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(mix64(550000 + static_cast<std::uint64_t>(r)));
    const Sample s = draw_sample(pop, n, rng);
    const Estimate e = estimate({EstimatorTag::difference_in_means, 0.0}, s, mu, rng);
    const double scaled = root_n * (e.theta_hat - mu);
    acc += scaled;
    acc_sq += scaled * scaled;
    sigma_hat_acc += e.sigma_hat;
  }
  const double mc_var = acc_sq / reps - (acc / reps) * (acc / reps);
  const double target_var = kStandardDimSd * kStandardDimSd;
  // variance estimate has relative se sqrt(2/reps)
  CHECK(std::abs(mc_var - target_var) <= 4.5 * std::sqrt(2.0 / reps) * target_var);
  // plug-in sigma_hat consistency: within 2% at n = 10^4
  CHECK(std::abs(sigma_hat_acc / reps - kStandardDimSd) <= 0.02 * kStandardDimSd);
}
