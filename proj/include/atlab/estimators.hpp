#pragma once

#include "atlab/distributions.hpp"
#include "atlab/rng.hpp"

namespace atlab {

enum class EstimatorTag { oracle_tau_mean, difference_in_means, synthetic_normal };

const char* to_string(EstimatorTag tag);

/// Which estimator of the population average effect to run. synthetic_normal
/// is the exactly-normal reference estimator: sqrt(n)(theta_hat - mu) is
/// N(0, sigma^2) at every finite n, not just in the limit, so the closed-form
/// mismatch and MSE expressions hold literally for it.
struct EstimatorKind {
  EstimatorTag tag = EstimatorTag::oracle_tau_mean;
  double synthetic_sigma = 0.0;  // > 0 when tag == synthetic_normal
};

/// Point estimate plus the plug-in standard deviation of the sqrt(n)-scaled
/// limit (diagnostic only; oracle formulas use the analytic sd).
struct Estimate {
  double theta_hat = 0.0;
  double sigma_hat = 0.0;
};

/// Runs one estimator on one sample. mu is the oracle population mean,
/// consumed only by synthetic_normal. Throws EmptyArm when
/// difference_in_means meets a sample with an empty treatment or control
/// arm; callers redraw and count the discard.
Estimate estimate(const EstimatorKind& kind, const Sample& sample, double mu,
                  RngStream& rng);

/// Synthetic estimator evaluated without materializing a sample: theta_hat =
/// mu + sigma * z / sqrt(n). Used by the simulation engine, which skips
/// sample drawing for synthetic cells.
Estimate synthetic_estimate(double mu, double sigma, std::int64_t n, double z);

/// The analytic asymptotic standard deviation sigma of sqrt(n)(theta_hat - mu)
/// for the given population and estimator. Throws DegenerateVariance when it
/// would be zero.
double asymptotic_sd(const PopulationSpec& pop, const EstimatorKind& kind);

}  // namespace atlab
