#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace fgclock::cli {

// Flag values as parsed from the command line. Unset optionals fall back to
// the config file, then to built-in defaults.
struct Options {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda_xi;
  std::optional<double> lambda_psi;
  std::optional<double> sigma;
  std::optional<std::size_t> rounds;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> instances;
  std::optional<unsigned> workers;
  std::string variant = "all";
  std::optional<std::string> axis;
  std::optional<std::string> out;
  std::optional<std::string> input;
};

// Each command returns a process exit code (see ExitCode) and writes a
// one-line diagnostic to `err` on failure.

// Writes <out>_observations.csv, <out>_path.csv and <out>_manifest.json.
int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err);

// Reads a k,U,V file and prints the estimates as JSON.
int cmd_estimate(const Options& opts, std::ostream& out, std::ostream& err);

// Writes the MSE table to <out> (CSV), <out stem>.json and
// <out stem>.manifest.json.
int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err);

// Random instances against the exact active-set oracle; prints a summary.
int cmd_compare_oracle(const Options& opts, std::ostream& out,
                       std::ostream& err);

}  // namespace fgclock::cli
