#pragma once

// Monte Carlo comparison of the offset estimators.
//
// Each trial simulates a latent path and its observations, runs every
// requested estimator, and scores theta_hat_N against the final latent offset
// theta_N. Trial seeds are derived from (master seed, axis index, trial
// index) with derive_seed(), so the table is bit-identical for a fixed config
// regardless of how many worker threads run the trials.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fgclock/estimators.hpp"
#include "fgclock/model.hpp"

namespace fgclock {

enum class Estimator { kFgeRecursive, kFgePaper, kMl };

std::string_view to_string(Estimator e) noexcept;
Estimator parse_estimator(std::string_view tag);  // "fge-recursive", ...
inline constexpr Estimator kAllEstimators[] = {
    Estimator::kFgeRecursive, Estimator::kFgePaper, Estimator::kMl};

enum class SweepAxis { kRounds, kSigma };

std::string_view to_string(SweepAxis a) noexcept;
SweepAxis parse_axis(std::string_view name);  // throws UsageError

struct SweepConfig {
  ClockModelParams base;
  std::vector<std::size_t> rounds_list;  // used by mse_vs_rounds
  std::vector<double> sigma_list;        // used by mse_vs_sigma
  std::size_t trials = 10'000;
  std::uint64_t master_seed = 20111;
  std::vector<Estimator> estimators{std::begin(kAllEstimators),
                                    std::end(kAllEstimators)};
  // 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;

  void validate(SweepAxis axis) const;
};

struct MseRow {
  double axis = 0.0;
  Estimator estimator = Estimator::kMl;
  double mse = 0.0;
  double std_error = 0.0;  // NaN when trials == 1
  std::size_t trials = 0;
  std::string error;  // non-empty marks a failed cell; mse/std_error are NaN

  bool ok() const noexcept { return error.empty(); }
};

struct MseTable {
  SweepAxis axis = SweepAxis::kRounds;
  std::vector<MseRow> rows;  // axis-major, estimators in config order

  // Row for (axis value, estimator); throws std::out_of_range if absent.
  const MseRow& at(double axis_value, Estimator e) const;
};

MseTable mse_vs_rounds(const SweepConfig& config);
MseTable mse_vs_sigma(const SweepConfig& config);
MseTable run_sweep(const SweepConfig& config, SweepAxis axis);

// theta_hat for one estimator on one observation series.
OffsetEstimate estimate_offset(const ObservationSeries& obs,
                               const ClockModelParams& params, Estimator e);

struct ComparisonEntry {
  std::string label;  // estimator tag or "oracle"
  double xi_hat_n = 0.0;
  double psi_hat_n = 0.0;
  double theta_hat_n = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  // |theta_i - theta_j| over entries; symmetric with a zero diagonal.
  std::vector<std::vector<double>> theta_deviation;
  std::vector<std::vector<double>> xi_deviation;
  std::vector<std::vector<double>> psi_deviation;
  bool has_oracle = false;

  const ComparisonEntry& entry(std::string_view label) const;
};

// All three estimators plus the exact MAP oracle when 1 <= N <= 12 and
// sigma > 0.
ComparisonReport compare_estimators(std::span<const double> u,
                                    std::span<const double> v,
                                    const ClockModelParams& params);

}  // namespace fgclock
