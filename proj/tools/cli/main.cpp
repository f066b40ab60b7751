#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/errors.hpp"

namespace {

void add_model_flags(CLI::App* cmd, fgclock::cli::Options& o) {
  cmd->add_option("--config", o.config, "JSON config or run manifest");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--lambda-xi", o.lambda_xi, "Forward delay rate");
  cmd->add_option("--lambda-psi", o.lambda_psi, "Reverse delay rate");
  cmd->add_option("--sigma", o.sigma, "Gauss-Markov increment stddev");
  cmd->add_option("--rounds", o.rounds, "Number of exchange rounds N");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fgclock::cli;

  CLI::App app{"Clock offset estimation for two-way timing exchanges"};
  app.set_version_flag("--version", artifact_version());
  app.require_subcommand(1);

  Options o;

  auto* simulate = app.add_subcommand("simulate", "Simulate latent paths and observations");
  add_model_flags(simulate, o);
  simulate->add_option("--out", o.out, "Output file prefix");

  auto* estimate = app.add_subcommand("estimate", "Estimate the offset from a k,U,V CSV");
  add_model_flags(estimate, o);
  estimate->add_option("input,--input", o.input, "Observation CSV")->required();
  estimate->add_option("--variant", o.variant, "recursive, paper, ml or all");

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo MSE sweep");
  add_model_flags(sweep, o);
  sweep->add_option("--axis", o.axis, "rounds or sigma")->required();
  sweep->add_option("--trials", o.trials, "Trials per sweep point");
  sweep->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  sweep->add_option("--out", o.out, "Output CSV path");

  auto* compare = app.add_subcommand("compare-oracle",
                                     "Check estimators against the exact MAP oracle");
  add_model_flags(compare, o);
  compare->add_option("--instances", o.instances, "Random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*simulate) return cmd_simulate(o, std::cout, std::cerr);
  if (*estimate) return cmd_estimate(o, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(o, std::cout, std::cerr);
  return cmd_compare_oracle(o, std::cout, std::cerr);
}
