#pragma once

// Max-product (MAP) estimators for the clock offset of a two-way exchange
// with exponential delays and Gauss-Markov drift.
//
// For one chain (xi with observations U, or psi with V) the backward
// max-product sweep leaves messages whose exponents are quadratic with
// per-level coefficients (A_k, B_k, C_k, D_k). The forward pass then maps the
// previous estimate through the affine kernel
//
//   g_k(x) = -(C_k x + D_k) / (2 A_k)
//
// and clips it at the observation: xhat_k = min(U_k, g_k(xhat_{k-1})), with
// xhat_0 = +inf. Since A_k = -1/(2 sigma^2) and C_k = 1/sigma^2 at every
// level, g_k(x) = x + D_k sigma^2 with D_k = (N - k + 1) lambda.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fgclock/extended_real.hpp"

namespace fgclock {

struct BackwardConstants {
  struct Level {
    double a;  // coefficient of x_k^2
    double b;  // coefficient of x_{k-1}^2
    double c;  // coefficient of x_k x_{k-1}
    double d;  // coefficient of x_k
  };

  double lambda = 0.0;
  double sigma = 0.0;
  std::vector<Level> levels;  // levels[k-1] holds level k, k = 1..N

  std::size_t rounds() const noexcept { return levels.size(); }
  // 1-based; throws UsageError when k is outside 1..N.
  const Level& level(std::size_t k) const;
};

// Initializes level N with A = B = -1/(2 sigma^2), C = 1/sigma^2, D = lambda
// and recurses down to level 1:
//   A_{k-1} = -1/(2 sigma^2) + B_k - C_k^2 / (4 A_k)
//   D_{k-1} = lambda - C_k D_k / (2 A_k)
// Throws UnsupportedError for sigma == 0.
BackwardConstants backward_constants(double lambda, double sigma,
                                     std::size_t rounds);

// g_k(x), evaluated as x + D_k sigma^2. Maps +inf to +inf.
ExtendedReal shift_kernel(const BackwardConstants& constants, std::size_t k,
                          ExtendedReal x);

// g_k(x) evaluated literally as -(C_k x + D_k) / (2 A_k). Only finite x.
double shift_kernel_quotient(const BackwardConstants& constants, std::size_t k,
                             double x);

// G_k^m(x) = g_m(g_{m-1}(... g_k(x))). Requires 1 <= k <= m <= N.
ExtendedReal compose_shift(const BackwardConstants& constants, std::size_t k,
                           std::size_t m, ExtendedReal x);

struct BacktrackResult {
  std::vector<double> xi_hat;        // rounds 1..N at 0..N-1, clipped
  std::vector<ExtendedReal> xi_bar;  // unconstrained maximizers
  ExtendedReal xi0_hat = ExtendedReal::plus_infinity();

  double final_estimate() const { return xi_hat.back(); }
};

// Forward sweep xhat_k = min(obs_k, g_k(xhat_{k-1})) from xhat_0 = +inf.
// At sigma == 0 this is the running minimum of the observations.
BacktrackResult backtrack_estimate(std::span<const double> obs, double lambda,
                                   double sigma);

// min_k obs_k + (N - k) lambda sigma^2: the linear-shift closed form.
double closed_form_estimate_paper(std::span<const double> obs, double lambda,
                                  double sigma);

enum class Variant {
  kRecursive,  // backtracking recursion over the composed kernels
  kPaper,      // linear-shift closed form
  kMl,         // sigma -> 0 limit: running minima
};

std::string_view to_string(Variant v) noexcept;
// Accepts "recursive", "paper", "ml". Throws UsageError otherwise.
Variant parse_variant(std::string_view name);

struct OffsetEstimate {
  double xi_hat_n = 0.0;
  double psi_hat_n = 0.0;
  double theta_hat_n = 0.0;  // (xi_hat_n - psi_hat_n) / 2
  Variant variant = Variant::kRecursive;
};

// Runs the chosen xi estimator on (u, lambda_xi) and the same estimator on
// (v, lambda_psi). Variant::kMl is accepted and forwards to ml_offset.
OffsetEstimate fge_offset(std::span<const double> u, std::span<const double> v,
                          double lambda_xi, double lambda_psi, double sigma,
                          Variant variant);

OffsetEstimate ml_offset(std::span<const double> u, std::span<const double> v);

}  // namespace fgclock
