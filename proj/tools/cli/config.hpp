#pragma once

// JSON run configuration shared by every subcommand. The document mirrors
// ClockModelParams and SweepConfig field names:
//
//   { "lambda_xi": 10, "lambda_psi": 10, "sigma": 0.01, "d0": 1,
//     "theta0": 0.5, "rounds": 25, "seed": 20111, "trials": 10000,
//     "rounds_list": [2, 3, ...], "sigma_list": [1e-4, ...],
//     "estimators": ["fge-recursive", "fge-paper", "ml"] }
//
// A run manifest (which stores the resolved config under "config") is
// accepted wherever a config file is.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgclock/experiments.hpp"

namespace fgclock::cli {

struct RunConfig {
  SweepConfig sweep;  // sweep.base holds the model parameters

  ClockModelParams& params() { return sweep.base; }
  const ClockModelParams& params() const { return sweep.base; }
  std::uint64_t seed() const { return sweep.master_seed; }
};

RunConfig default_config();

// Overlays the fields present in `json_text` onto `cfg`. Throws
// ParameterError naming the field for type errors and unknown keys, and
// ParseError for malformed JSON.
void apply_json(RunConfig& cfg, const std::string& json_text);

void load_config_file(RunConfig& cfg, const std::string& path);

// Resolved config as a JSON object (the "config" member of a manifest).
std::string config_to_json(const RunConfig& cfg, int indent = 2);

struct Manifest {
  std::string subcommand;
  RunConfig config;
  std::vector<std::string> outputs;
  std::size_t negative_delay_rounds = 0;  // simulate only
};

std::string manifest_to_json(const Manifest& m);

std::string artifact_version();

}  // namespace fgclock::cli
