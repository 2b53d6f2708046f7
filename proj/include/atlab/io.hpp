#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "atlab/bounds.hpp"
#include "atlab/simulation.hpp"

namespace atlab {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// %g with the given number of significant digits.
std::string format_sig(double v, int digits);

inline constexpr const char* kCellsCsvHeader =
    "n,R_effective,mse_pop,mse_pop_se,mse_adaptive,mse_adaptive_se,mismatch_rate,"
    "mismatch_se,discards";

inline constexpr const char* kRepsCsvHeader =
    "n,rep,theta_hat,theta_Fn,err_pop,err_adaptive,mismatch";

inline constexpr const char* kBoundsCsvHeader =
    "n,mismatch_prob,mse_bound,n_times_bound,exact_mse";

void write_cells_csv(std::ostream& out, std::span<const CellSummary> cells);
void write_reps_csv(std::ostream& out, std::span<const ReplicationRecord> records);

/// 12 significant digits per value, per the bounds command contract.
void write_bounds_csv(std::ostream& out, std::span<const BoundRow> rows);

/// Parses a cells.csv document; numeric fields round-trip bit-exactly.
/// Throws SchemaError on any malformation.
std::vector<CellSummary> read_cells_csv(std::istream& in);

/// The rates.json document text (trailing newline included). Used by both
/// the simulate writer and the offline rates command so re-fitting the same
/// cells reproduces the bytes.
std::string rates_json_text(const RateReport& pop, const RateReport& adaptive);

}  // namespace atlab
