#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "atlab/adaptive_target.hpp"
#include "atlab/distributions.hpp"
#include "atlab/estimators.hpp"
#include "atlab/numeric.hpp"

namespace atlab {

/// Full description of one Monte Carlo experiment. Outputs are a pure
/// function of this struct (plus the worker count never changes them).
struct SimulationConfig {
  PopulationSpec population;
  EstimatorKind estimator;
  std::vector<std::int64_t> n_grid;
  std::int64_t replications = 0;
  std::uint64_t master_seed = 0;
  bool record_replications = false;
  /// Allows a degenerate effect law (margin c = 0); the clamp band then
  /// collapses to the population mean and the adaptive error equals the
  /// population error in every replication.
  bool negative_control = false;
  /// Test hook: forces the synthetic estimator's normal draw to zero.
  /// Never part of the configuration file schema.
  bool zero_noise_hook = false;
};

/// Semantic checks (grid strictly increasing, replications >= 100,
/// heterogeneity unless negative_control, usable estimator variance).
/// Throws ValidationError.
void validate(const SimulationConfig& config);

/// Oracle triple for the configured population/estimator pair.
TargetContext make_target_context(const SimulationConfig& config);

/// Avalanche-mixed stream seed for one replication. A pure function of the
/// triple, independent of worker count and scheduling; distinct triples
/// collide only with ~2^-64 probability.
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t n,
                               std::uint64_t rep);

/// One replication's outcome.
struct ReplicationRecord {
  std::int64_t n = 0;
  std::int64_t rep = 0;
  double theta_hat = 0.0;
  double theta_fn = 0.0;
  double err_pop = 0.0;       // theta_hat - mu
  double err_adaptive = 0.0;  // sign(err_pop) * max(0, |err_pop| - c)
  bool mismatch = false;      // |err_pop| > c
};

/// Per-(n) Monte Carlo aggregates with their MC standard errors.
struct CellSummary {
  std::int64_t n = 0;
  std::int64_t r_effective = 0;
  double mse_pop = 0.0;
  double mse_pop_se = 0.0;
  double mse_adaptive = 0.0;
  double mse_adaptive_se = 0.0;
  double mismatch_rate = 0.0;
  double mismatch_se = 0.0;
  std::int64_t discards = 0;
};

/// A rate fit that may be degenerate (fewer than two usable points is a
/// documented outcome, not an error: the adaptive error is exactly zero off
/// the tail event, so all-zero cells are expected).
struct RateReport {
  int n_points_used = 0;
  std::optional<RateFit> fit;
};

/// Closed-form bound comparison for one synthetic cell.
struct BoundComparison {
  std::int64_t n = 0;
  double mse_adaptive = 0.0;
  double mse_adaptive_se = 0.0;
  double mse_bound = 0.0;
  double exact_mse = 0.0;
};

struct ExperimentResult {
  TargetContext ctx;
  std::vector<CellSummary> cells;
  RateReport pop_rate;
  RateReport adaptive_rate;
  std::vector<BoundComparison> bound_check;  // synthetic_normal with c > 0 only
  std::vector<ReplicationRecord> records;    // populated when record_replications
};

/// Runs the R replications of one cell on `workers` threads (0 = hardware
/// concurrency). Aggregation is performed in ascending replication order
/// regardless of scheduling, so results are bit-identical for any worker
/// count. Empty-arm samples are discarded, counted, and redrawn from a
/// reserved seed subspace.
CellSummary run_cell(const SimulationConfig& config, std::int64_t n, int workers,
                     std::vector<ReplicationRecord>* records);

/// Runs every cell of the grid and fits log-log convergence rates for both
/// error targets. Cells with fewer than 50 mismatch events are excluded
/// from the adaptive fit (they carry no rate information at feasible R).
ExperimentResult run_experiment(const SimulationConfig& config, int workers = 0);

/// Mismatch-event count recovered from a serialized rate; exact for any
/// count below 2^51.
std::int64_t mismatch_count_of(const CellSummary& cell);

/// Rate reports from cell summaries alone. Shared by run_experiment and the
/// offline rates command so both produce identical fits from the same cells.
RateReport pop_rate_report(std::span<const CellSummary> cells);
RateReport adaptive_rate_report(std::span<const CellSummary> cells);

/// Minimum mismatch events for a cell to enter the adaptive-rate fit.
inline constexpr std::int64_t kMinMismatchEventsForFit = 50;

}  // namespace atlab
