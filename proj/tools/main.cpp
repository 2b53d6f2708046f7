#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atlab/commands.hpp"
#include "atlab/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for clamped data-adaptive causal targets"};
  app.set_version_flag("--version", atlab::kVersion);
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a configured experiment");
  atlab::SimulateOptions sim_options;
  std::int64_t seed_override = -1;
  bool has_seed = false;
  simulate->add_option("--config", sim_options.config_path, "JSON configuration path")
      ->required();
  simulate->add_option("--out", sim_options.out_dir, "output directory")->required();
  simulate->add_option("--workers", sim_options.workers,
                       "worker threads (default: hardware)");
  simulate->add_option("--seed", seed_override, "override master_seed")
      ->check(CLI::NonNegativeNumber);
  simulate->callback([&] { has_seed = simulate->count("--seed") > 0; });

  // bounds
  auto* bounds = app.add_subcommand("bounds", "tabulate closed-form bound rows as CSV");
  double bounds_c = 0.0;
  double bounds_sigma = 0.0;
  std::vector<std::int64_t> bounds_ns;
  bounds->add_option("--c", bounds_c, "heterogeneity margin c > 0")->required();
  bounds->add_option("--sigma", bounds_sigma, "asymptotic sd sigma > 0")->required();
  bounds->add_option("--n", bounds_ns, "sample sizes")->required()->delimiter(',');

  // weights
  auto* weights = app.add_subcommand("weights", "construct a local-average weighting");
  std::string dist_spec;
  double target = 0.0;
  weights->add_option("--dist", dist_spec, "distribution spec as JSON")->required();
  weights->add_option("--target", target, "local average m to realize")->required();

  // rates
  auto* rates = app.add_subcommand("rates", "re-fit convergence rates from cells.csv");
  std::string cells_path;
  rates->add_option("--cells", cells_path, "path to cells.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : atlab::kExitConfigError;
  }

  if (simulate->parsed()) {
    if (has_seed) {
      sim_options.seed_override = static_cast<std::uint64_t>(seed_override);
    }
    return atlab::cmd_simulate(sim_options, std::cerr);
  }
  if (bounds->parsed()) {
    return atlab::cmd_bounds(bounds_c, bounds_sigma, bounds_ns, std::cout, std::cerr);
  }
  if (weights->parsed()) {
    return atlab::cmd_weights(dist_spec, target, std::cout, std::cerr);
  }
  if (rates->parsed()) {
    return atlab::cmd_rates(cells_path, std::cout, std::cerr);
  }
  return atlab::kExitConfigError;
}
