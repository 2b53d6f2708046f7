#include "atlab/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "atlab/bounds.hpp"
#include "atlab/errors.hpp"
#include "atlab/rng.hpp"

namespace atlab {

namespace {

constexpr int kMaxRedrawAttempts = 100;
constexpr std::int64_t kScheduleChunk = 1024;

struct RepOutcome {
  double theta_hat = 0.0;
  double theta_fn = 0.0;
  double err_pop = 0.0;
  double err_adaptive = 0.0;
  std::int32_t discards = 0;
  bool mismatch = false;
};

struct CellContext {
  const SimulationConfig* config = nullptr;
  TargetContext target;
  std::int64_t n = 0;
};

/// Seed-mix input for redraw attempt k >= 1 of a replication: the high bit
/// reserves a subspace disjoint from plain replication indices.
std::uint64_t redraw_rep_input(std::int64_t rep, int attempt) {
  return (1ull << 63) | (static_cast<std::uint64_t>(rep) << 7) |
         static_cast<std::uint64_t>(attempt);
}

RepOutcome run_one(const CellContext& cc, std::int64_t rep) {
  const SimulationConfig& cfg = *cc.config;
  RepOutcome out;

  Estimate est;
  if (cfg.estimator.tag == EstimatorTag::synthetic_normal) {
    RngStream stream(replication_seed(cfg.master_seed,
                                      static_cast<std::uint64_t>(cc.n),
                                      static_cast<std::uint64_t>(rep)));
    const double z = cfg.zero_noise_hook ? 0.0 : stream.next_normal();
    est = synthetic_estimate(cc.target.mu, cfg.estimator.synthetic_sigma, cc.n, z);
  } else {
    bool done = false;
    for (int attempt = 0; attempt < kMaxRedrawAttempts && !done; ++attempt) {
      const std::uint64_t rep_input =
          attempt == 0 ? static_cast<std::uint64_t>(rep) : redraw_rep_input(rep, attempt);
      RngStream stream(replication_seed(cfg.master_seed,
                                        static_cast<std::uint64_t>(cc.n), rep_input));
      const Sample sample = draw_sample(cfg.population, cc.n, stream);
      try {
        est = estimate(cfg.estimator, sample, cc.target.mu, stream);
        done = true;
      } catch (const EmptyArm&) {
        ++out.discards;
      }
    }
    if (!done) {
      throw Error("replication " + std::to_string(rep) + " at n = " +
                  std::to_string(cc.n) + " exceeded the empty-arm redraw budget");
    }
  }

  const double d = est.theta_hat - cc.target.mu;
  const double gap = std::max(0.0, std::abs(d) - cc.target.c);
  out.theta_hat = est.theta_hat;
  out.theta_fn = clamp_to_band(est.theta_hat, cc.target.mu, cc.target.c);
  out.err_pop = d;
  out.err_adaptive = std::copysign(gap, d);
  out.mismatch = std::abs(d) > cc.target.c;
  return out;
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void validate(const SimulationConfig& config) {
  validate(config.population);
  if (config.n_grid.empty()) {
    throw ValidationError("n_grid must be nonempty");
  }
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] < 1) {
      throw ValidationError("n_grid entries must be >= 1");
    }
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1]) {
      throw ValidationError("n_grid not strictly increasing");
    }
  }
  if (config.replications < 100) {
    throw ValidationError("replications must be >= 100");
  }
  if (config.estimator.tag == EstimatorTag::synthetic_normal &&
      !(config.estimator.synthetic_sigma > 0.0)) {
    throw ValidationError("synthetic_normal requires sigma > 0");
  }
  if (config.estimator.tag != EstimatorTag::synthetic_normal && config.n_grid.front() < 2) {
    throw ValidationError("sample-based estimators require n >= 2");
  }
  const double c = heterogeneity_margin(config.population.effect);
  if (!(c > 0.0) && !config.negative_control) {
    throw ValidationError(
        "effect heterogeneity is required: the effect law has margin c = 0 "
        "(degenerate effects); set negative_control to run anyway");
  }
  try {
    asymptotic_sd(config.population, config.estimator);
  } catch (const DegenerateVariance& e) {
    throw ValidationError(std::string("estimator unusable for this population: ") +
                          e.what());
  }
}

TargetContext make_target_context(const SimulationConfig& config) {
  TargetContext ctx;
  ctx.mu = config.population.effect.mean();
  ctx.c = heterogeneity_margin(config.population.effect);
  ctx.sigma = asymptotic_sd(config.population, config.estimator);
  return ctx;
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t n,
                               std::uint64_t rep) {
  std::uint64_t h = mix64(master_seed + kGoldenGamma);
  h = mix64(h ^ (n + kGoldenGamma));
  h = mix64(h ^ (rep + kGoldenGamma));
  return h;
}

CellSummary run_cell(const SimulationConfig& config, std::int64_t n, int workers,
                     std::vector<ReplicationRecord>* records) {
  const std::int64_t reps = config.replications;
  CellContext cc{&config, make_target_context(config), n};

  std::vector<RepOutcome> buffer(static_cast<std::size_t>(reps));
  const int n_workers = std::min<std::int64_t>(resolve_workers(workers), reps);
  if (n_workers <= 1) {
    for (std::int64_t i = 0; i < reps; ++i) {
      buffer[static_cast<std::size_t>(i)] = run_one(cc, i);
    }
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
      try {
        while (true) {
          const std::int64_t begin = next.fetch_add(kScheduleChunk);
          if (begin >= reps || failed.load(std::memory_order_relaxed)) break;
          const std::int64_t end = std::min(reps, begin + kScheduleChunk);
          for (std::int64_t i = begin; i < end; ++i) {
            buffer[static_cast<std::size_t>(i)] = run_one(cc, i);
          }
        }
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers - 1));
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(first_error);
  }

  // Aggregate in ascending replication order so the floating-point result
  // is independent of scheduling.
  const auto r = static_cast<double>(reps);
  double sum_qp = 0.0;
  double sum_qa = 0.0;
  std::int64_t mismatches = 0;
  std::int64_t discards = 0;
  for (const RepOutcome& o : buffer) {
    sum_qp += o.err_pop * o.err_pop;
    sum_qa += o.err_adaptive * o.err_adaptive;
    mismatches += o.mismatch ? 1 : 0;
    discards += o.discards;
  }
  const double mse_pop = sum_qp / r;
  const double mse_adaptive = sum_qa / r;
  double ssq_p = 0.0;
  double ssq_a = 0.0;
  for (const RepOutcome& o : buffer) {
    const double dp = o.err_pop * o.err_pop - mse_pop;
    const double da = o.err_adaptive * o.err_adaptive - mse_adaptive;
    ssq_p += dp * dp;
    ssq_a += da * da;
  }

  CellSummary cell;
  cell.n = n;
  cell.r_effective = reps;
  cell.mse_pop = mse_pop;
  cell.mse_adaptive = mse_adaptive;
  if (reps >= 2) {
    cell.mse_pop_se = std::sqrt(ssq_p / (r - 1.0)) / std::sqrt(r);
    cell.mse_adaptive_se = std::sqrt(ssq_a / (r - 1.0)) / std::sqrt(r);
  }
  const double p_hat = static_cast<double>(mismatches) / r;
  cell.mismatch_rate = p_hat;
  cell.mismatch_se = std::sqrt(p_hat * (1.0 - p_hat) / r);
  cell.discards = discards;

  if (records != nullptr) {
    records->reserve(records->size() + buffer.size());
    for (std::int64_t i = 0; i < reps; ++i) {
      const RepOutcome& o = buffer[static_cast<std::size_t>(i)];
      records->push_back({n, i, o.theta_hat, o.theta_fn, o.err_pop, o.err_adaptive,
                          o.mismatch});
    }
  }
  return cell;
}

ExperimentResult run_experiment(const SimulationConfig& config, int workers) {
  validate(config);
  ExperimentResult result;
  result.ctx = make_target_context(config);
  for (std::int64_t n : config.n_grid) {
    result.cells.push_back(run_cell(config, n, workers,
                                    config.record_replications ? &result.records
                                                               : nullptr));
  }
  result.pop_rate = pop_rate_report(result.cells);
  result.adaptive_rate = adaptive_rate_report(result.cells);

  if (config.estimator.tag == EstimatorTag::synthetic_normal && result.ctx.c > 0.0) {
    for (const CellSummary& cell : result.cells) {
      result.bound_check.push_back(
          {cell.n, cell.mse_adaptive, cell.mse_adaptive_se,
           mse_upper_bound(result.ctx.c, result.ctx.sigma, cell.n),
           exact_clamp_mse(result.ctx.c, result.ctx.sigma, cell.n)});
    }
  }
  return result;
}

std::int64_t mismatch_count_of(const CellSummary& cell) {
  return std::llround(cell.mismatch_rate * static_cast<double>(cell.r_effective));
}

namespace {

RateReport fit_or_degenerate(const std::vector<RatePoint>& points) {
  RateReport report;
  try {
    const RateFit fit = log_log_ols(points);
    report.n_points_used = fit.n_points_used;
    report.fit = fit;
  } catch (const InsufficientPoints&) {
    int usable = 0;
    for (const RatePoint& p : points) {
      if (p.value > 0.0) ++usable;
    }
    report.n_points_used = usable;
  }
  return report;
}

}  // namespace

RateReport pop_rate_report(std::span<const CellSummary> cells) {
  std::vector<RatePoint> points;
  points.reserve(cells.size());
  for (const CellSummary& cell : cells) {
    points.push_back({cell.n, cell.mse_pop});
  }
  return fit_or_degenerate(points);
}

RateReport adaptive_rate_report(std::span<const CellSummary> cells) {
  std::vector<RatePoint> points;
  points.reserve(cells.size());
  for (const CellSummary& cell : cells) {
    if (mismatch_count_of(cell) >= kMinMismatchEventsForFit) {
      points.push_back({cell.n, cell.mse_adaptive});
    }
  }
  return fit_or_degenerate(points);
}

}  // namespace atlab
