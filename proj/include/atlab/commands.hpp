#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace atlab {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  int workers = 0;  // 0 = hardware concurrency
  std::optional<std::uint64_t> seed_override;
};

/// Runs an experiment and writes cells.csv, rates.json, manifest.json (and
/// reps.csv when the configuration records replications) into out_dir.
int cmd_simulate(const SimulateOptions& options, std::ostream& diag);

/// Tabulates mismatch probability, the MSE bound, n * bound, and the exact
/// clamp MSE as CSV on `out`.
int cmd_bounds(double c, double sigma, const std::vector<std::int64_t>& ns,
               std::ostream& out, std::ostream& diag);

/// Builds the weighting that realizes local average m for the given
/// distribution spec (a JSON document) and reports it with its verification
/// residual.
int cmd_weights(const std::string& dist_spec, double target, std::ostream& out,
                std::ostream& diag);

/// Re-fits convergence rates from a previously written cells.csv; emits the
/// same rates.json the original run produced.
int cmd_rates(const std::string& cells_path, std::ostream& out, std::ostream& diag);

}  // namespace atlab
