#include "fgclock/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fgclock/errors.hpp"

namespace fgclock {

namespace {

void check_rate(double lambda, const char* field) {
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw ParameterError(field, "must be a finite positive rate");
}

void check_sigma(double sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0)
    throw ParameterError("sigma", "must be finite and >= 0");
}

void check_series(std::span<const double> obs, const char* name) {
  if (obs.empty())
    throw ShapeError(std::string(name) + ": observation series is empty");
  for (double x : obs) {
    if (!std::isfinite(x))
      throw ParameterError(name, "observations must be finite");
  }
}

void check_pair(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ShapeError("U has " + std::to_string(u.size()) + " rounds, V has " +
                     std::to_string(v.size()));
  }
  check_series(u, "U");
  check_series(v, "V");
}

}  // namespace

const BackwardConstants::Level& BackwardConstants::level(std::size_t k) const {
  if (k < 1 || k > levels.size()) {
    throw UsageError("level " + std::to_string(k) + " outside 1.." +
                     std::to_string(levels.size()));
  }
  return levels[k - 1];
}

BackwardConstants backward_constants(double lambda, double sigma,
                                     std::size_t rounds) {
  check_rate(lambda, "lambda");
  check_sigma(sigma);
  if (sigma == 0.0) {
    throw UnsupportedError(
        "backward constants diverge at sigma = 0; use the running-minimum form");
  }
  if (rounds < 1) throw ParameterError("rounds", "must be >= 1");

  const double var = sigma * sigma;
  const double half_prec = -1.0 / (2.0 * var);
  const double prec = 1.0 / var;

  BackwardConstants out;
  out.lambda = lambda;
  out.sigma = sigma;
  out.levels.resize(rounds);
  out.levels[rounds - 1] = {half_prec, half_prec, prec, lambda};
  for (std::size_t k = rounds - 1; k >= 1; --k) {
    const auto& next = out.levels[k];
    auto& cur = out.levels[k - 1];
    // Both updates share the ratio c/(2a); forming it once keeps the rounding
    // noise of a and d from compounding over long horizons.
    const double ratio = next.c / (2.0 * next.a);
    cur.a = half_prec + next.b - 0.5 * ratio * next.c;
    cur.b = half_prec;
    cur.c = prec;
    cur.d = lambda - ratio * next.d;
  }
  return out;
}

ExtendedReal shift_kernel(const BackwardConstants& constants, std::size_t k,
                          ExtendedReal x) {
  const auto& lv = constants.level(k);
  return x + lv.d * constants.sigma * constants.sigma;
}

double shift_kernel_quotient(const BackwardConstants& constants, std::size_t k,
                             double x) {
  const auto& lv = constants.level(k);
  return -(lv.c * x + lv.d) / (2.0 * lv.a);
}

ExtendedReal compose_shift(const BackwardConstants& constants, std::size_t k,
                           std::size_t m, ExtendedReal x) {
  if (k > m) {
    throw UsageError("compose_shift: k = " + std::to_string(k) +
                     " exceeds m = " + std::to_string(m));
  }
  constants.level(k);
  constants.level(m);
  for (std::size_t j = k; j <= m; ++j) x = shift_kernel(constants, j, x);
  return x;
}

BacktrackResult backtrack_estimate(std::span<const double> obs, double lambda,
                                   double sigma) {
  check_series(obs, "U");
  check_rate(lambda, "lambda");
  check_sigma(sigma);
  const std::size_t n = obs.size();

  BacktrackResult out;
  out.xi_hat.resize(n);
  out.xi_bar.resize(n);

  ExtendedReal prev = out.xi0_hat;
  if (sigma == 0.0) {
    for (std::size_t k = 1; k <= n; ++k) {
      out.xi_bar[k - 1] = prev;
      prev = min(prev, obs[k - 1]);
      out.xi_hat[k - 1] = prev.value();
    }
    return out;
  }

  const BackwardConstants constants = backward_constants(lambda, sigma, n);
  for (std::size_t k = 1; k <= n; ++k) {
    out.xi_bar[k - 1] = shift_kernel(constants, k, prev);
    prev = min(out.xi_bar[k - 1], obs[k - 1]);
    out.xi_hat[k - 1] = prev.value();
  }
  return out;
}

double closed_form_estimate_paper(std::span<const double> obs, double lambda,
                                  double sigma) {
  check_series(obs, "U");
  check_rate(lambda, "lambda");
  check_sigma(sigma);
  const std::size_t n = obs.size();
  const double step = lambda * sigma * sigma;
  double best = obs[n - 1];
  for (std::size_t k = 1; k < n; ++k) {
    best = std::min(best, obs[k - 1] + static_cast<double>(n - k) * step);
  }
  return best;
}

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::kRecursive:
      return "recursive";
    case Variant::kPaper:
      return "paper";
    case Variant::kMl:
      return "ml";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "recursive") return Variant::kRecursive;
  if (name == "paper") return Variant::kPaper;
  if (name == "ml") return Variant::kMl;
  throw UsageError("unknown estimator variant '" + std::string(name) + "'");
}

OffsetEstimate fge_offset(std::span<const double> u, std::span<const double> v,
                          double lambda_xi, double lambda_psi, double sigma,
                          Variant variant) {
  check_pair(u, v);
  check_rate(lambda_xi, "lambda_xi");
  check_rate(lambda_psi, "lambda_psi");
  check_sigma(sigma);

  OffsetEstimate out;
  switch (variant) {
    case Variant::kRecursive:
      out.xi_hat_n = backtrack_estimate(u, lambda_xi, sigma).final_estimate();
      out.psi_hat_n = backtrack_estimate(v, lambda_psi, sigma).final_estimate();
      break;
    case Variant::kPaper:
      out.xi_hat_n = closed_form_estimate_paper(u, lambda_xi, sigma);
      out.psi_hat_n = closed_form_estimate_paper(v, lambda_psi, sigma);
      break;
    case Variant::kMl:
      return ml_offset(u, v);
  }
  out.theta_hat_n = (out.xi_hat_n - out.psi_hat_n) / 2.0;
  out.variant = variant;
  return out;
}

OffsetEstimate ml_offset(std::span<const double> u, std::span<const double> v) {
  check_pair(u, v);
  OffsetEstimate out;
  out.xi_hat_n = *std::min_element(u.begin(), u.end());
  out.psi_hat_n = *std::min_element(v.begin(), v.end());
  out.theta_hat_n = (out.xi_hat_n - out.psi_hat_n) / 2.0;
  out.variant = Variant::kMl;
  return out;
}

}  // namespace fgclock
