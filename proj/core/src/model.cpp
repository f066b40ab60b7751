#include "fgclock/model.hpp"

#include <cmath>
#include <string>

#include "fgclock/errors.hpp"
#include "fgclock/random.hpp"

namespace fgclock {

namespace {

bool is_finite(double x) { return std::isfinite(x); }

}  // namespace

void ClockModelParams::validate() const {
  if (!is_finite(lambda_xi) || lambda_xi <= 0.0)
    throw ParameterError("lambda_xi", "must be a finite positive rate");
  if (!is_finite(lambda_psi) || lambda_psi <= 0.0)
    throw ParameterError("lambda_psi", "must be a finite positive rate");
  if (!is_finite(sigma) || sigma < 0.0)
    throw ParameterError("sigma", "must be finite and >= 0");
  if (!is_finite(d0) || d0 < 0.0)
    throw ParameterError("d0", "must be finite and >= 0");
  if (!is_finite(theta0)) throw ParameterError("theta0", "must be finite");
  if (rounds < 1) throw ParameterError("rounds", "must be >= 1");
}

LatentPath simulate_paths(const ClockModelParams& params, std::uint64_t seed) {
  params.validate();
  RandomStream stream(seed);
  const std::size_t n = params.rounds;

  LatentPath path;
  path.xi.resize(n + 1);
  path.psi.resize(n + 1);
  path.xi[0] = params.d0 + params.theta0;
  path.psi[0] = params.d0 - params.theta0;
  for (std::size_t k = 1; k <= n; ++k) {
    path.xi[k] = path.xi[k - 1] + stream.normal(params.sigma);
    path.psi[k] = path.psi[k - 1] + stream.normal(params.sigma);
    if (path.delay(k) < 0.0) ++path.negative_delay_rounds;
  }
  return path;
}

ObservationSeries simulate_observations(const LatentPath& path,
                                        const ClockModelParams& params,
                                        std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.rounds;
  if (path.xi.size() != n + 1 || path.psi.size() != n + 1) {
    throw ShapeError("latent path has " + std::to_string(path.xi.size()) +
                     "/" + std::to_string(path.psi.size()) +
                     " entries, expected " + std::to_string(n + 1));
  }
  RandomStream stream(seed);
  ObservationSeries obs;
  obs.u.resize(n);
  obs.v.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    obs.u[k - 1] = path.xi[k] + stream.exponential(params.lambda_xi);
    obs.v[k - 1] = path.psi[k] + stream.exponential(params.lambda_psi);
  }
  return obs;
}

ExtendedReal log_posterior(std::span<const double> candidate,
                           std::span<const double> obs, double lambda,
                           double sigma) {
  if (sigma == 0.0)
    throw UnsupportedError("log_posterior: density is degenerate at sigma = 0");
  if (!(sigma > 0.0)) throw ParameterError("sigma", "must be > 0");
  if (!(lambda > 0.0)) throw ParameterError("lambda", "must be > 0");
  if (obs.empty() || candidate.size() != obs.size() + 1) {
    throw ShapeError("log_posterior: candidate must have N+1 entries for N = " +
                     std::to_string(obs.size()) + " observations");
  }
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  double total = 0.0;
  for (std::size_t k = 1; k < candidate.size(); ++k) {
    if (candidate[k] > obs[k - 1]) return ExtendedReal::minus_infinity();
    const double step = candidate[k] - candidate[k - 1];
    total += -step * step * inv_two_var + lambda * candidate[k];
  }
  return total;
}

}  // namespace fgclock
