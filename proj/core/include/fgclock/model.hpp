#pragma once

// Generative model of a two-way timing exchange.
//
// Each round k = 1..N produces a forward time-stamp difference U_k and a
// reverse difference V_k:
//
//   U_k = xi_k  + X_k,   X_k ~ Exp(lambda_xi)
//   V_k = psi_k + Y_k,   Y_k ~ Exp(lambda_psi)
//
// with xi = d + theta and psi = d - theta. Both follow independent
// Gauss-Markov random walks with N(0, sigma^2) increments.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fgclock/extended_real.hpp"

namespace fgclock {

struct ClockModelParams {
  double lambda_xi = 10.0;   // forward delay rate (1/time)
  double lambda_psi = 10.0;  // reverse delay rate (1/time)
  double sigma = 1e-2;       // Gauss-Markov increment stddev (time)
  double d0 = 1.0;           // initial propagation delay
  double theta0 = 0.5;       // initial clock offset
  std::size_t rounds = 25;   // N

  // Throws ParameterError naming the first offending field.
  void validate() const;
};

struct LatentPath {
  std::vector<double> xi;   // indices 0..N
  std::vector<double> psi;  // indices 0..N
  // Rounds (k >= 1) where the implied delay d_k went negative. The model does
  // not forbid it; callers may want to know.
  std::size_t negative_delay_rounds = 0;

  std::size_t rounds() const noexcept { return xi.empty() ? 0 : xi.size() - 1; }
  double theta(std::size_t k) const { return (xi.at(k) - psi.at(k)) / 2.0; }
  double delay(std::size_t k) const { return (xi.at(k) + psi.at(k)) / 2.0; }
};

struct ObservationSeries {
  std::vector<double> u;  // rounds 1..N stored at 0..N-1
  std::vector<double> v;

  std::size_t rounds() const noexcept { return u.size(); }
};

LatentPath simulate_paths(const ClockModelParams& params, std::uint64_t seed);

ObservationSeries simulate_observations(const LatentPath& path,
                                        const ClockModelParams& params,
                                        std::uint64_t seed);

// Log-posterior of one chain, up to an additive constant:
//   sum_{k=1..N} [ -(x_k - x_{k-1})^2 / (2 sigma^2) + lambda * x_k ]
// and -inf when any x_k > obs_k. `candidate` holds x_0..x_N.
ExtendedReal log_posterior(std::span<const double> candidate,
                           std::span<const double> obs, double lambda,
                           double sigma);

// Convenience overload for the xi chain.
inline ExtendedReal log_posterior(std::span<const double> candidate_xi,
                                  std::span<const double> u,
                                  const ClockModelParams& params) {
  return log_posterior(candidate_xi, u, params.lambda_xi, params.sigma);
}

}  // namespace fgclock
