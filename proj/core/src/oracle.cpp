#include "fgclock/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <string>

#include "fgclock/errors.hpp"

namespace fgclock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(std::span<const double> obs, double lambda, double sigma) {
  if (obs.empty()) throw ShapeError("observation series is empty");
  for (double x : obs) {
    if (!std::isfinite(x)) throw ParameterError("U", "observations must be finite");
  }
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw ParameterError("lambda", "must be a finite positive rate");
  if (sigma == 0.0)
    throw UnsupportedError("MAP oracle undefined at sigma = 0");
  if (!std::isfinite(sigma) || sigma < 0.0)
    throw ParameterError("sigma", "must be finite and > 0");
}

// Solves the stationarity equations for free rounds first..last (0-based,
// inclusive) with the neighbouring active rounds pinned to `path`. Row k:
//   deg_k x_k - sum_{j ~ k} x_j = lambda sigma^2
// where deg_k counts chain neighbours. Thomas algorithm.
void solve_free_segment(std::vector<double>& path, std::size_t first,
                        std::size_t last, double drift) {
  const std::size_t n = path.size();
  const std::size_t m = last - first + 1;
  std::vector<double> diag(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = first + i;
    diag[i] = static_cast<double>((k > 0 ? 1 : 0) + (k + 1 < n ? 1 : 0));
    rhs[i] = drift;
  }
  if (first > 0) rhs[0] += path[first - 1];
  if (last + 1 < n) rhs[m - 1] += path[last + 1];

  // Forward elimination with unit off-diagonals of -1.
  std::vector<double> c_prime(m, 0.0);
  double denom = diag[0];
  c_prime[0] = -1.0 / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < m; ++i) {
    denom = diag[i] + c_prime[i - 1];
    c_prime[i] = -1.0 / denom;
    rhs[i] = (rhs[i] + rhs[i - 1]) / denom;
  }
  path[last] = rhs[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    rhs[i] -= c_prime[i] * rhs[i + 1];
    path[first + i] = rhs[i];
  }
}

}  // namespace

double map_objective(std::span<const double> path, std::span<const double> obs,
                     double lambda, double sigma) {
  if (path.size() != obs.size())
    throw ShapeError("path and observations differ in length");
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  double total = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path[k] > obs[k]) return -kInf;
    if (k > 0) {
      const double step = path[k] - path[k - 1];
      total -= step * step * inv_two_var;
    }
    total += lambda * path[k];
  }
  return total;
}

std::vector<double> map_gradient(std::span<const double> path, double lambda,
                                 double sigma) {
  const double inv_var = 1.0 / (sigma * sigma);
  const std::size_t n = path.size();
  std::vector<double> grad(n, lambda);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) grad[k] -= (path[k] - path[k - 1]) * inv_var;
    if (k + 1 < n) grad[k] += (path[k + 1] - path[k]) * inv_var;
  }
  return grad;
}

double kkt_residual(const MapSolution& solution, std::span<const double> obs,
                    double lambda, double sigma) {
  // Measured on sigma^2 * gradient so the residual is in time units and does
  // not blow up as sigma shrinks.
  const auto grad = map_gradient(solution.path, lambda, sigma);
  const double scale = sigma * sigma;
  std::vector<bool> active(solution.path.size(), false);
  for (std::size_t k : solution.active_set) active.at(k - 1) = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < grad.size(); ++k) {
    const double g = grad[k] * scale;
    worst = std::max(worst, active[k] ? std::max(0.0, -g) : std::abs(g));
    worst = std::max(worst, solution.path[k] - obs[k]);
  }
  return worst;
}

MapSolution exact_map_active_set(std::span<const double> obs, double lambda,
                                 double sigma) {
  check_inputs(obs, lambda, sigma);
  const std::size_t n = obs.size();
  if (n > kMaxEnumerationRounds) {
    throw SizeError("active-set enumeration supports N <= " +
                    std::to_string(kMaxEnumerationRounds) + ", got " +
                    std::to_string(n));
  }
  const double drift = lambda * sigma * sigma;

  MapSolution best;
  best.objective = -kInf;
  std::vector<double> path(n);
  std::vector<std::size_t> active;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    active.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        path[k] = obs[k];
        active.push_back(k + 1);
      }
    }
    for (std::size_t k = 0; k < n;) {
      if (mask & (1u << k)) {
        ++k;
        continue;
      }
      std::size_t last = k;
      while (last + 1 < n && !(mask & (1u << (last + 1)))) ++last;
      solve_free_segment(path, k, last, drift);
      k = last + 1;
    }

    bool feasible = true;
    for (std::size_t k = 0; k < n && feasible; ++k) {
      feasible = path[k] <= obs[k] + 1e-12 * (1.0 + std::abs(obs[k]));
    }
    if (!feasible) continue;

    // Clamp round-off so the candidate is exactly feasible.
    for (std::size_t k = 0; k < n; ++k) path[k] = std::min(path[k], obs[k]);
    const double value = map_objective(path, obs, lambda, sigma);
    if (value > best.objective ||
        (value == best.objective && active < best.active_set)) {
      best.path = path;
      best.objective = value;
      best.active_set = active;
    }
  }
  return best;
}

MapSolution coordinate_ascent_map(std::span<const double> obs, double lambda,
                                  double sigma, double tol,
                                  std::size_t max_iters) {
  check_inputs(obs, lambda, sigma);
  if (!(tol > 0.0)) throw ParameterError("tol", "must be > 0");
  const std::size_t n = obs.size();
  const double drift = lambda * sigma * sigma;

  std::vector<double> x(n, *std::min_element(obs.begin(), obs.end()));
  bool converged = false;
  for (std::size_t iter = 0; iter < max_iters && !converged; ++iter) {
    double largest = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double target;
      if (n == 1) {
        target = kInf;
      } else if (k == 0) {
        target = x[1] + drift;
      } else if (k + 1 == n) {
        target = x[k - 1] + drift;
      } else {
        target = 0.5 * (x[k - 1] + x[k + 1] + drift);
      }
      const double next = std::min(target, obs[k]);
      largest = std::max(largest, std::abs(next - x[k]));
      x[k] = next;
    }
    converged = largest < tol;
  }
  if (!converged) {
    throw ConvergenceError("coordinate ascent did not converge in " +
                               std::to_string(max_iters) + " sweeps",
                           x);
  }

  MapSolution out;
  out.path = x;
  out.objective = map_objective(x, obs, lambda, sigma);
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k] == obs[k]) out.active_set.push_back(k + 1);
  }
  return out;
}

Grid default_grid(std::span<const double> obs, double sigma,
                  std::size_t points) {
  if (obs.empty()) throw ShapeError("observation series is empty");
  const auto [lo_it, hi_it] = std::minmax_element(obs.begin(), obs.end());
  const double margin =
      5.0 * sigma * std::sqrt(static_cast<double>(obs.size()));
  return Grid{*lo_it - margin, *hi_it, points};
}

double grid_max_marginal(std::span<const double> obs, double lambda,
                         double sigma, double lo, double hi,
                         std::size_t points) {
  check_inputs(obs, lambda, sigma);
  if (!(lo < hi)) throw ParameterError("grid", "requires lo < hi");
  if (points < 512) throw ParameterError("points", "must be >= 512");

  const Grid grid{lo, hi, points};
  const double h = grid.step();
  // Transition penalty between grid indices i and j is (i - j)^2 * h^2/(2 var).
  const double penalty = h * h / (2.0 * sigma * sigma);

  std::vector<double> score(points);
  std::vector<double> cost(points);
  std::vector<double> envelope(points);
  std::vector<std::size_t> vertex(points);
  std::vector<double> boundary(points + 1);

  auto apply_likelihood = [&](std::size_t round) {
    bool any = false;
    for (std::size_t i = 0; i < points; ++i) {
      const double x = grid.at(i);
      if (x > obs[round] || !std::isfinite(score[i])) {
        score[i] = -kInf;
      } else {
        score[i] += lambda * x;
        any = true;
      }
    }
    if (!any) {
      throw CoverageError("grid has no feasible point at round " +
                          std::to_string(round + 1));
    }
  };

  // The flat prior on x_0 makes the incoming message to x_1 constant.
  std::fill(score.begin(), score.end(), 0.0);
  apply_likelihood(0);

  for (std::size_t round = 1; round < obs.size(); ++round) {
    // max_j score[j] - penalty (i-j)^2 == -penalty * min_j [(i-j)^2 + cost[j]]
    for (std::size_t j = 0; j < points; ++j) {
      cost[j] = std::isfinite(score[j]) ? -score[j] / penalty : kInf;
    }
    // Lower envelope of parabolas (Felzenszwalb-Huttenlocher).
    std::ptrdiff_t top = -1;
    for (std::size_t q = 0; q < points; ++q) {
      if (!std::isfinite(cost[q])) continue;
      const double fq = cost[q] + static_cast<double>(q) * static_cast<double>(q);
      if (top < 0) {
        top = 0;
        vertex[0] = q;
        boundary[0] = -kInf;
        boundary[1] = kInf;
        continue;
      }
      double s;
      for (;;) {
        const std::size_t v = vertex[top];
        const double fv = cost[v] + static_cast<double>(v) * static_cast<double>(v);
        s = (fq - fv) / (2.0 * static_cast<double>(q - v));
        if (s > boundary[top]) break;
        --top;
      }
      ++top;
      vertex[top] = q;
      boundary[top] = s;
      boundary[top + 1] = kInf;
    }
    std::size_t seg = 0;
    for (std::size_t i = 0; i < points; ++i) {
      while (boundary[seg + 1] < static_cast<double>(i)) ++seg;
      const double di = static_cast<double>(i) - static_cast<double>(vertex[seg]);
      envelope[i] = di * di + cost[vertex[seg]];
    }
    for (std::size_t i = 0; i < points; ++i) score[i] = -penalty * envelope[i];
    apply_likelihood(round);
  }

  const auto best = static_cast<std::size_t>(
      std::max_element(score.begin(), score.end()) - score.begin());
  if (best == 0) {
    throw CoverageError("max-marginal argmax sits on the lower grid edge");
  }
  if (best + 1 == points && hi < obs.back() - 0.5 * h) {
    throw CoverageError("max-marginal argmax sits on the upper grid edge");
  }
  return grid.at(best);
}

}  // namespace fgclock
