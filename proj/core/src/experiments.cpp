#include "fgclock/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "fgclock/errors.hpp"
#include "fgclock/oracle.hpp"
#include "fgclock/random.hpp"

namespace fgclock {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier compensated sum, accumulated in index order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

unsigned resolve_workers(unsigned requested, std::size_t trials) {
  unsigned w = requested ? requested : std::thread::hardware_concurrency();
  w = std::max(1u, w);
  return static_cast<unsigned>(std::min<std::size_t>(w, trials));
}

// Squared errors of every estimator for every trial of one sweep cell,
// laid out as errors[estimator][trial].
std::vector<std::vector<double>> run_cell(const SweepConfig& config,
                                          const ClockModelParams& params,
                                          std::size_t axis_index) {
  const std::size_t trials = config.trials;
  const std::size_t n_est = config.estimators.size();
  std::vector<std::vector<double>> errors(n_est, std::vector<double>(trials));

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::uint64_t seed =
          derive_seed(config.master_seed, {axis_index, t});
      const LatentPath path =
          simulate_paths(params, derive_seed(seed, {kPathStream}));
      const ObservationSeries obs = simulate_observations(
          path, params, derive_seed(seed, {kObservationStream}));
      const double truth = path.theta(params.rounds);
      for (std::size_t e = 0; e < n_est; ++e) {
        const double est =
            estimate_offset(obs, params, config.estimators[e]).theta_hat_n;
        if (!std::isfinite(est)) {
          throw Error("non-finite estimate from " +
                      std::string(to_string(config.estimators[e])));
        }
        const double err = est - truth;
        errors[e][t] = err * err;
      }
    }
  };

  const unsigned workers = resolve_workers(config.workers, trials);
  if (workers == 1) {
    run_range(0, trials);
    return errors;
  }
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = trials * w / workers;
    const std::size_t end = trials * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        run_range(begin, end);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return errors;
}

MseRow summarize(double axis_value, Estimator e,
                 const std::vector<double>& sq_errors) {
  const std::size_t n = sq_errors.size();
  CompensatedSum sum;
  for (double x : sq_errors) sum.add(x);
  const double mean = sum.value() / static_cast<double>(n);

  MseRow row;
  row.axis = axis_value;
  row.estimator = e;
  row.mse = mean;
  row.trials = n;
  if (n < 2) {
    row.std_error = kNaN;
  } else {
    CompensatedSum dev;
    for (double x : sq_errors) dev.add((x - mean) * (x - mean));
    const double var = dev.value() / static_cast<double>(n - 1);
    row.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return row;
}

template <typename AxisValue, typename Configure>
MseTable sweep(const SweepConfig& config, SweepAxis axis,
               const std::vector<AxisValue>& values, Configure configure) {
  config.validate(axis);
  MseTable table;
  table.axis = axis;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double axis_value = static_cast<double>(values[i]);
    try {
      ClockModelParams params = config.base;
      configure(params, values[i]);
      params.validate();
      const auto errors = run_cell(config, params, i);
      for (std::size_t e = 0; e < config.estimators.size(); ++e) {
        table.rows.push_back(
            summarize(axis_value, config.estimators[e], errors[e]));
      }
    } catch (const std::exception& ex) {
      for (Estimator e : config.estimators) {
        MseRow row;
        row.axis = axis_value;
        row.estimator = e;
        row.mse = kNaN;
        row.std_error = kNaN;
        row.trials = 0;
        row.error = ex.what();
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

template <typename T>
void check_increasing(const std::vector<T>& values, const char* field) {
  if (values.empty()) throw ParameterError(field, "sweep list is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i]))
      throw ParameterError(field, "sweep list must be strictly increasing");
  }
}

}  // namespace

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::kFgeRecursive:
      return "fge-recursive";
    case Estimator::kFgePaper:
      return "fge-paper";
    case Estimator::kMl:
      return "ml";
  }
  return "unknown";
}

Estimator parse_estimator(std::string_view tag) {
  for (Estimator e : kAllEstimators) {
    if (to_string(e) == tag) return e;
  }
  throw UsageError("unknown estimator '" + std::string(tag) + "'");
}

std::string_view to_string(SweepAxis a) noexcept {
  return a == SweepAxis::kRounds ? "rounds" : "sigma";
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "rounds") return SweepAxis::kRounds;
  if (name == "sigma") return SweepAxis::kSigma;
  throw UsageError("unknown sweep axis '" + std::string(name) +
                   "' (expected rounds or sigma)");
}

void SweepConfig::validate(SweepAxis axis) const {
  if (trials < 1) throw ParameterError("trials", "must be >= 1");
  if (estimators.empty())
    throw ParameterError("estimators", "at least one estimator is required");
  if (axis == SweepAxis::kRounds) {
    check_increasing(rounds_list, "rounds_list");
    if (rounds_list.front() < 1)
      throw ParameterError("rounds_list", "rounds must be >= 1");
  } else {
    check_increasing(sigma_list, "sigma_list");
    for (double s : sigma_list) {
      if (!std::isfinite(s) || s < 0.0)
        throw ParameterError("sigma_list", "sigma must be finite and >= 0");
    }
  }
}

const MseRow& MseTable::at(double axis_value, Estimator e) const {
  for (const auto& row : rows) {
    if (row.axis == axis_value && row.estimator == e) return row;
  }
  throw std::out_of_range("no row for axis value " +
                          std::to_string(axis_value) + " and estimator " +
                          std::string(to_string(e)));
}

MseTable mse_vs_rounds(const SweepConfig& config) {
  return sweep(config, SweepAxis::kRounds, config.rounds_list,
               [](ClockModelParams& p, std::size_t n) { p.rounds = n; });
}

MseTable mse_vs_sigma(const SweepConfig& config) {
  return sweep(config, SweepAxis::kSigma, config.sigma_list,
               [](ClockModelParams& p, double s) { p.sigma = s; });
}

MseTable run_sweep(const SweepConfig& config, SweepAxis axis) {
  return axis == SweepAxis::kRounds ? mse_vs_rounds(config)
                                    : mse_vs_sigma(config);
}

OffsetEstimate estimate_offset(const ObservationSeries& obs,
                               const ClockModelParams& params, Estimator e) {
  switch (e) {
    case Estimator::kFgeRecursive:
      return fge_offset(obs.u, obs.v, params.lambda_xi, params.lambda_psi,
                        params.sigma, Variant::kRecursive);
    case Estimator::kFgePaper:
      return fge_offset(obs.u, obs.v, params.lambda_xi, params.lambda_psi,
                        params.sigma, Variant::kPaper);
    case Estimator::kMl:
      break;
  }
  return ml_offset(obs.u, obs.v);
}

const ComparisonEntry& ComparisonReport::entry(std::string_view label) const {
  for (const auto& e : entries) {
    if (e.label == label) return e;
  }
  throw std::out_of_range("no comparison entry '" + std::string(label) + "'");
}

ComparisonReport compare_estimators(std::span<const double> u,
                                    std::span<const double> v,
                                    const ClockModelParams& params) {
  ObservationSeries obs{{u.begin(), u.end()}, {v.begin(), v.end()}};
  ComparisonReport report;
  for (Estimator e : kAllEstimators) {
    const auto est = estimate_offset(obs, params, e);
    report.entries.push_back({std::string(to_string(e)), est.xi_hat_n,
                              est.psi_hat_n, est.theta_hat_n});
  }
  if (params.sigma > 0.0 && u.size() <= kMaxEnumerationRounds) {
    const double xi =
        exact_map_active_set(u, params.lambda_xi, params.sigma).final_estimate();
    const double psi =
        exact_map_active_set(v, params.lambda_psi, params.sigma).final_estimate();
    report.entries.push_back({"oracle", xi, psi, (xi - psi) / 2.0});
    report.has_oracle = true;
  }

  const std::size_t n = report.entries.size();
  auto matrix = [&](auto field) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] = std::abs(field(report.entries[i]) - field(report.entries[j]));
      }
    }
    return m;
  };
  report.theta_deviation =
      matrix([](const ComparisonEntry& e) { return e.theta_hat_n; });
  report.xi_deviation =
      matrix([](const ComparisonEntry& e) { return e.xi_hat_n; });
  report.psi_deviation =
      matrix([](const ComparisonEntry& e) { return e.psi_hat_n; });
  return report;
}

}  // namespace fgclock
