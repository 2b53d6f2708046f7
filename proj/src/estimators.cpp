#include "atlab/estimators.hpp"

#include <cmath>
#include <cstddef>

#include "atlab/errors.hpp"

namespace atlab {

namespace {

struct ArmStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double sample_var = 0.0;  // n-1 denominator; 0 when count < 2
};

ArmStats arm_stats(const Sample& s, std::uint8_t arm) {
  ArmStats st;
  double sum = 0.0;
  for (std::size_t i = 0; i < s.y_obs.size(); ++i) {
    if (s.z[i] == arm) {
      ++st.count;
      sum += s.y_obs[i];
    }
  }
  if (st.count == 0) return st;
  st.mean = sum / static_cast<double>(st.count);
  if (st.count >= 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < s.y_obs.size(); ++i) {
      if (s.z[i] == arm) {
        const double d = s.y_obs[i] - st.mean;
        ss += d * d;
      }
    }
    st.sample_var = ss / static_cast<double>(st.count - 1);
  }
  return st;
}

}  // namespace

const char* to_string(EstimatorTag tag) {
  switch (tag) {
    case EstimatorTag::oracle_tau_mean: return "oracle_tau_mean";
    case EstimatorTag::difference_in_means: return "difference_in_means";
    case EstimatorTag::synthetic_normal: return "synthetic_normal";
  }
  return "unknown";
}

Estimate estimate(const EstimatorKind& kind, const Sample& sample, double mu,
                  RngStream& rng) {
  switch (kind.tag) {
    case EstimatorTag::oracle_tau_mean: {
      const auto n = static_cast<double>(sample.n);
      double sum = 0.0;
      for (double t : sample.tau_latent) sum += t;
      const double mean = sum / n;
      double ss = 0.0;
      for (double t : sample.tau_latent) {
        const double d = t - mean;
        ss += d * d;
      }
      const double sd = sample.n >= 2 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      return {mean, sd};
    }
    case EstimatorTag::difference_in_means: {
      const ArmStats treated = arm_stats(sample, 1);
      const ArmStats control = arm_stats(sample, 0);
      if (treated.count == 0 || control.count == 0) {
        throw EmptyArm(treated.count == 0 ? "no treated units" : "no control units");
      }
      const double theta = treated.mean - control.mean;
      const double n = static_cast<double>(sample.n);
      const double sigma_hat =
          std::sqrt(n * (treated.sample_var / static_cast<double>(treated.count) +
                         control.sample_var / static_cast<double>(control.count)));
      return {theta, sigma_hat};
    }
    case EstimatorTag::synthetic_normal:
      return synthetic_estimate(mu, kind.synthetic_sigma, sample.n, rng.next_normal());
  }
  return {};
}

Estimate synthetic_estimate(double mu, double sigma, std::int64_t n, double z) {
  const double theta = mu + sigma * z / std::sqrt(static_cast<double>(n));
  return {theta, sigma};
}

double asymptotic_sd(const PopulationSpec& pop, const EstimatorKind& kind) {
  double sd = 0.0;
  switch (kind.tag) {
    case EstimatorTag::oracle_tau_mean:
      sd = std::sqrt(pop.effect.variance());
      break;
    case EstimatorTag::difference_in_means: {
      const double var_y0 = pop.baseline.variance();
      const double var_y1 = var_y0 + pop.effect.variance();  // tau independent of Y(0)
      const double p = pop.assignment_prob;
      sd = std::sqrt(var_y1 / p + var_y0 / (1.0 - p));
      break;
    }
    case EstimatorTag::synthetic_normal:
      sd = kind.synthetic_sigma;
      break;
  }
  if (!(sd > 0.0)) {
    throw DegenerateVariance(std::string("asymptotic sd is zero for ") +
                             to_string(kind.tag));
  }
  return sd;
}

}  // namespace atlab
