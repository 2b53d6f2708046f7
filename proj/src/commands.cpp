#include "atlab/commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "atlab/adaptive_target.hpp"
#include "atlab/bounds.hpp"
#include "atlab/config.hpp"
#include "atlab/errors.hpp"
#include "atlab/io.hpp"
#include "atlab/version.hpp"

namespace atlab {

namespace {

namespace fs = std::filesystem;

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open output file: " + path.string());
  }
  out << content;
  if (!out) {
    throw Error("write failed: " + path.string());
  }
}

int config_error(std::ostream& diag, const std::exception& e) {
  diag << "configuration error: " << e.what() << '\n';
  return kExitConfigError;
}

int runtime_error_exit(std::ostream& diag, const std::exception& e) {
  diag << "error: " << e.what() << '\n';
  return kExitRuntimeError;
}

}  // namespace

int cmd_simulate(const SimulateOptions& options, std::ostream& diag) {
  SimulationConfig config;
  try {
    config = parse_config_file(options.config_path);
    if (options.seed_override.has_value()) {
      config.master_seed = *options.seed_override;
    }
  } catch (const SchemaError& e) {
    return config_error(diag, e);
  } catch (const ValidationError& e) {
    return config_error(diag, e);
  }

  try {
    const std::string started = iso8601_utc_now();
    const ExperimentResult result = run_experiment(config, options.workers);

    fs::create_directories(options.out_dir);
    const fs::path out_dir(options.out_dir);

    std::vector<std::string> outputs;
    {
      std::ostringstream cells;
      write_cells_csv(cells, result.cells);
      write_file(out_dir / "cells.csv", cells.str());
      outputs.push_back("cells.csv");
    }
    if (config.record_replications) {
      std::ostringstream reps;
      write_reps_csv(reps, result.records);
      write_file(out_dir / "reps.csv", reps.str());
      outputs.push_back("reps.csv");
    }
    write_file(out_dir / "rates.json",
               rates_json_text(result.pop_rate, result.adaptive_rate));
    outputs.push_back("rates.json");

    nlohmann::json manifest;
    manifest["config_digest"] = config_digest(config);
    manifest["tool_version"] = kVersion;
    manifest["master_seed"] = config.master_seed;
    manifest["started"] = started;
    manifest["finished"] = iso8601_utc_now();
    outputs.push_back("manifest.json");
    manifest["outputs"] = outputs;
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

    return kExitOk;
  } catch (const std::exception& e) {
    return runtime_error_exit(diag, e);
  }
}

int cmd_bounds(double c, double sigma, const std::vector<std::int64_t>& ns,
               std::ostream& out, std::ostream& diag) {
  if (!(c > 0.0) || !(sigma > 0.0)) {
    diag << "usage error: bounds requires c > 0 and sigma > 0\n";
    return kExitConfigError;
  }
  if (ns.empty()) {
    diag << "usage error: bounds requires at least one n\n";
    return kExitConfigError;
  }
  for (std::int64_t n : ns) {
    if (n < 1) {
      diag << "usage error: n values must be >= 1\n";
      return kExitConfigError;
    }
  }
  try {
    const std::vector<BoundRow> rows = tabulate_bounds(c, sigma, ns);
    write_bounds_csv(out, rows);
    return kExitOk;
  } catch (const std::exception& e) {
    return runtime_error_exit(diag, e);
  }
}

int cmd_weights(const std::string& dist_spec, double target, std::ostream& out,
                std::ostream& diag) {
  EffectDistribution dist = EffectDistribution::degenerate(0.0);
  try {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(dist_spec);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(std::string("distribution spec is not valid JSON: ") + e.what());
    }
    dist = distribution_from_json(doc, "$");
  } catch (const SchemaError& e) {
    return config_error(diag, e);
  } catch (const ValidationError& e) {
    return config_error(diag, e);
  }

  try {
    const WeightingFunction w = construct_weights(dist, target);
    const double residual = verify_weighting(dist, w, target);
    out << "kind: " << to_string(dist.kind()) << '\n';
    out << "mean: " << format_double(dist.mean()) << '\n';
    out << "margin_c: " << format_double(heterogeneity_margin(dist)) << '\n';
    out << "target: " << format_double(target) << '\n';
    out << "direction: " << to_string(w.direction) << '\n';
    out << "lambda: " << format_double(w.lambda) << '\n';
    out << "threshold: " << format_double(w.threshold) << '\n';
    if (dist.kind() == EffectKind::two_point) {
      const auto& p = dist.two_point_params();
      out << "weight_at_a: " << format_double(w.weight(p.a)) << '\n';
      out << "weight_at_b: " << format_double(w.weight(p.b)) << '\n';
    }
    out << "weighted_mean: " << format_double(target + residual) << '\n';
    out << "residual: " << format_double(residual) << '\n';
    return kExitOk;
  } catch (const TargetOutOfRange& e) {
    diag << "target out of range: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DegenerateEffects& e) {
    return config_error(diag, e);
  } catch (const std::exception& e) {
    return runtime_error_exit(diag, e);
  }
}

int cmd_rates(const std::string& cells_path, std::ostream& out, std::ostream& diag) {
  std::vector<CellSummary> cells;
  try {
    std::ifstream in(cells_path);
    if (!in) {
      throw SchemaError("cannot open cells file: " + cells_path);
    }
    cells = read_cells_csv(in);
  } catch (const SchemaError& e) {
    return config_error(diag, e);
  }
  try {
    out << rates_json_text(pop_rate_report(cells), adaptive_rate_report(cells));
    return kExitOk;
  } catch (const std::exception& e) {
    return runtime_error_exit(diag, e);
  }
}

}  // namespace atlab
