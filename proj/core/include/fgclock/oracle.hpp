#pragma once

// Independent solvers for the single-chain constrained MAP problem
//
//   maximize   sum_{k=1..N} [ -(x_k - x_{k-1})^2 / (2 sigma^2) + lambda x_k ]
//   subject to x_k <= obs_k,  k = 1..N,   x_0 free (flat prior).
//
// The flat prior on x_0 puts its optimum at x_0 = x_1, so every solver here
// works on x_1..x_N only. None of them use the backward constants.

#include <cstddef>
#include <span>
#include <vector>

namespace fgclock {

struct MapSolution {
  std::vector<double> path;        // x_1..x_N
  double objective = 0.0;          // log-posterior (up to a constant)
  std::vector<std::size_t> active_set;  // 1-based rounds with x_k == obs_k

  double final_estimate() const { return path.back(); }
};

// Objective above with x_0 = x_1; -inf when infeasible.
double map_objective(std::span<const double> path, std::span<const double> obs,
                     double lambda, double sigma);

// Partial derivatives of map_objective with respect to x_1..x_N.
std::vector<double> map_gradient(std::span<const double> path, double lambda,
                                 double sigma);

// Largest KKT violation of `solution`: |grad| at free rounds, max(0, -grad)
// at active rounds, and max(0, x_k - obs_k) for feasibility.
double kkt_residual(const MapSolution& solution, std::span<const double> obs,
                    double lambda, double sigma);

inline constexpr std::size_t kMaxEnumerationRounds = 12;

// Enumerates every nonempty active set, solves the equality-constrained
// problem on each free segment by a tridiagonal solve, and keeps the best
// feasible candidate (ties go to the lexicographically smallest active set).
// Throws SizeError for N > 12 and UnsupportedError for sigma == 0.
MapSolution exact_map_active_set(std::span<const double> obs, double lambda,
                                 double sigma);

// Cyclic coordinate ascent from the constant path at min(obs). Each update
// is the clipped closed-form maximizer of the 1-D quadratic. Stops when the
// largest coordinate change in a sweep is below `tol`; throws
// ConvergenceError (carrying the last iterate) after `max_iters` sweeps.
MapSolution coordinate_ascent_map(std::span<const double> obs, double lambda,
                                  double sigma, double tol = 1e-13,
                                  std::size_t max_iters = 5'000'000);

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 0;

  double step() const { return (hi - lo) / static_cast<double>(points - 1); }
  double at(std::size_t i) const {
    return lo + static_cast<double>(i) * step();
  }
};

// [min obs - 5 sigma sqrt(N), max obs].
Grid default_grid(std::span<const double> obs, double sigma,
                  std::size_t points);

// Tabulated max-product over a uniform grid: forward messages are exact
// max-convolutions of the tabulated message with the Gaussian transition
// (lower envelope of parabolas), multiplied by the truncated exponential
// likelihood. Returns the grid point maximizing the max-marginal of x_N.
// Throws CoverageError when that argmax sits on a grid edge that truncates
// the feasible set, or when some round has no feasible grid point.
double grid_max_marginal(std::span<const double> obs, double lambda,
                         double sigma, double lo, double hi,
                         std::size_t points);

inline double grid_max_marginal(std::span<const double> obs, double lambda,
                                double sigma, const Grid& grid) {
  return grid_max_marginal(obs, lambda, sigma, grid.lo, grid.hi, grid.points);
}

}  // namespace fgclock
