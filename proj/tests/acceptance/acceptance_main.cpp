// Acceptance suite. Each criterion prints one PASS/FAIL line followed by
// indented detail lines. Run with no arguments for all criteria, or with
// --criterion N (repeatable) for a subset. Exit status is nonzero when any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/errors.hpp"
#include "fgclock/estimators.hpp"
#include "fgclock/experiments.hpp"
#include "fgclock/oracle.hpp"
#include "instances.hpp"

namespace {

using namespace fgclock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("info " + what); }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<void(Outcome&)> body;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <typename... Args>
std::string fmtn(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- 1. Oracle equivalence ---------------------------------------------
void oracle_equivalence(Outcome& out) {
  std::mt19937_64 rng(20111);
  double worst_rec = 0.0, worst_paper = 0.0;
  std::size_t paper_off = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_instance(rng, 10, {1.0, 10.0}, {1e-3, 1e-2, 1e-1});
    const double exact = exact_map_active_set(inst.u, inst.lambda, inst.sigma).final_estimate();
    const double rec = backtrack_estimate(inst.u, inst.lambda, inst.sigma).final_estimate();
    const double paper = closed_form_estimate_paper(inst.u, inst.lambda, inst.sigma);
    worst_rec = std::max(worst_rec, std::abs(rec - exact));
    worst_paper = std::max(worst_paper, std::abs(paper - exact));
    paper_off += std::abs(paper - exact) > 1e-8;
  }
  out.require(worst_rec <= 1e-8,
              fmt("max |backtrack - exact MAP| over 1000 instances = %.3e (tol 1e-8)", worst_rec));
  out.note(fmtn("linear-shift closed form: max |paper - exact MAP| = %.3e, off by > 1e-8 on %zu/1000",
                worst_paper, paper_off));
  out.note("the backtracking recursion (triangular shifts) is the exact MAP; the linear-shift form is not");
}

// --- 2. ML limit identity ------------------------------------------------
void ml_limit(Outcome& out) {
  std::mt19937_64 rng(20112);
  std::size_t exact_mismatch = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 10;
    const auto obs = testing::model_series(n, 10.0, 1e-2, rng());
    const double ml = ml_offset(obs.u, obs.v).theta_hat_n;
    for (Variant v : {Variant::kRecursive, Variant::kPaper}) {
      exact_mismatch += fge_offset(obs.u, obs.v, 10.0, 1.0, 0.0, v).theta_hat_n != ml;
    }
  }
  out.require(exact_mismatch == 0,
              fmtn("sigma = 0: fge (both variants) == ml exactly on 1000 instances (%zu mismatches)",
                   exact_mismatch));

  for (Variant v : {Variant::kPaper, Variant::kRecursive}) {
    for (double sigma : {1e-6, 1e-4}) {
      std::size_t violations = 0;
      double worst_ratio = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + rng() % 10;
        const double lxi = (rng() % 2) ? 10.0 : 1.0;
        const double lpsi = (rng() % 2) ? 10.0 : 1.0;
        ClockModelParams p;
        p.lambda_xi = lxi;
        p.lambda_psi = lpsi;
        p.sigma = sigma;
        p.rounds = n;
        const std::uint64_t seed = rng();
        const auto path = simulate_paths(p, derive_seed(seed, {kPathStream}));
        const auto obs = simulate_observations(path, p, derive_seed(seed, {kObservationStream}));
        const double gap = std::abs(fge_offset(obs.u, obs.v, lxi, lpsi, sigma, v).theta_hat_n -
                                    ml_offset(obs.u, obs.v).theta_hat_n);
        const double bound = static_cast<double>(n) * std::max(lxi, lpsi) * sigma * sigma;
        worst_ratio = std::max(worst_ratio, gap / bound);
        violations += gap > bound * (1.0 + 1e-9);
      }
      out.require(violations == 0,
                  fmtn("sigma = %.0e, %s: |fge - ml| <= N max(lambda) sigma^2 on 1000 instances "
                       "(%zu violations, worst gap/bound = %.3f)",
                       sigma, std::string(to_string(v)).c_str(), violations, worst_ratio));
    }
  }
  out.note("recursive shifts grow as lambda sigma^2 j(j+1)/2, so its gap can reach "
           "N(N-1)/4 lambda sigma^2; the linear bound only holds for N <= 5");
}

// --- 3. MSE vs rounds ----------------------------------------------------
void fig_rounds(Outcome& out) {
  SweepConfig cfg;
  cfg.base.lambda_xi = cfg.base.lambda_psi = 10.0;
  cfg.base.sigma = 1e-2;
  for (std::size_t n = 2; n <= 25; ++n) cfg.rounds_list.push_back(n);
  cfg.trials = 10'000;
  cfg.master_seed = 20113;
  const MseTable t = mse_vs_rounds(cfg);
  for (double n : {2.0, 5.0, 10.0, 25.0}) {
    out.note(fmtn("N=%2.0f  mse fge-recursive %.4e (se %.1e)  fge-paper %.4e  ml %.4e (se %.1e)", n,
                  t.at(n, Estimator::kFgeRecursive).mse, t.at(n, Estimator::kFgeRecursive).std_error,
                  t.at(n, Estimator::kFgePaper).mse, t.at(n, Estimator::kMl).mse,
                  t.at(n, Estimator::kMl).std_error));
  }
  const auto& rec = t.at(25, Estimator::kFgeRecursive);
  const auto& ml = t.at(25, Estimator::kMl);
  const double margin = 3.0 * std::hypot(rec.std_error, ml.std_error);
  out.require(ml.mse - rec.mse > margin,
              fmtn("N=25: mse(ml) - mse(fge-recursive) = %.3e > 3 SE = %.3e", ml.mse - rec.mse, margin));
  const auto& ml5 = t.at(5, Estimator::kMl);
  out.require(ml.mse > ml5.mse,
              fmtn("mse(ml) at N=25 (%.4e) > mse(ml) at N=5 (%.4e)", ml.mse, ml5.mse));
}

// --- 4. MSE vs sigma -----------------------------------------------------
void fig_sigma(Outcome& out) {
  SweepConfig cfg;
  cfg.base.lambda_xi = cfg.base.lambda_psi = 10.0;
  cfg.base.rounds = 25;
  cfg.sigma_list = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  cfg.trials = 10'000;
  cfg.master_seed = 20114;
  const MseTable t = mse_vs_sigma(cfg);
  for (double s : cfg.sigma_list) {
    out.note(fmtn("sigma=%.0e  mse fge-recursive %.4e  fge-paper %.4e  ml %.4e", s,
                  t.at(s, Estimator::kFgeRecursive).mse, t.at(s, Estimator::kFgePaper).mse,
                  t.at(s, Estimator::kMl).mse));
  }
  const double ratio = t.at(1e-4, Estimator::kFgeRecursive).mse / t.at(1e-4, Estimator::kMl).mse;
  out.require(ratio >= 0.9 && ratio <= 1.1,
              fmt("sigma=1e-4: mse(fge-recursive)/mse(ml) = %.5f in [0.9, 1.1]", ratio));
  const auto& rec = t.at(1e-1, Estimator::kFgeRecursive);
  const auto& ml = t.at(1e-1, Estimator::kMl);
  const double margin = 3.0 * std::hypot(rec.std_error, ml.std_error);
  out.require(ml.mse - rec.mse > margin,
              fmtn("sigma=1e-1: mse(ml) - mse(fge-recursive) = %.3e > 3 SE = %.3e", ml.mse - rec.mse,
                   margin));
}

// --- 5. Lemma 1 ----------------------------------------------------------
void lemma_one(Outcome& out) {
  std::mt19937_64 rng(20115);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  const BackwardConstants sets[] = {backward_constants(10.0, 1e-2, 25),
                                    backward_constants(1.0, 1e-1, 100),
                                    backward_constants(3.5, 0.7, 10)};
  std::size_t distributive_fail = 0, monotone_fail = 0;
  for (int i = 0; i < 100'000; ++i) {
    const auto& c = sets[i % 3];
    const std::size_t k = 1 + rng() % c.rounds();
    const ExtendedReal a = (rng() % 100 == 0) ? ExtendedReal::plus_infinity() : value(rng);
    const ExtendedReal b = value(rng);
    const auto ga = shift_kernel(c, k, a), gb = shift_kernel(c, k, b);
    distributive_fail += shift_kernel(c, k, min(a, b)) != min(ga, gb);
    monotone_fail += (a <= b) != (ga <= gb) && a != b;
  }
  out.require(distributive_fail == 0,
              fmtn("g_k(min(a,b)) == min(g_k(a), g_k(b)) on 1e5 triples (%zu failures)", distributive_fail));
  out.require(monotone_fail == 0, fmtn("g_k order-preserving on 1e5 triples (%zu failures)", monotone_fail));
}

// --- 6. Constant recursion closed forms ----------------------------------
void constants_closed_form(Outcome& out) {
  double worst_a = 0.0, worst_d = 0.0;
  for (double lambda : {1.0, 10.0}) {
    for (double sigma : {1e-3, 1e-2, 1e-1, 1.0}) {
      for (std::size_t n : {1u, 2u, 10u, 100u, 1000u}) {
        const auto c = backward_constants(lambda, sigma, n);
        const double a_ref = -1.0 / (2.0 * sigma * sigma);
        for (std::size_t i = 0; i < n; ++i) {
          const auto& lv = c.level(n - i);
          worst_a = std::max(worst_a, std::abs(lv.a - a_ref) / std::abs(a_ref));
          const double d_ref = static_cast<double>(i + 1) * lambda;
          worst_d = std::max(worst_d, std::abs(lv.d - d_ref) / d_ref);
        }
      }
    }
  }
  out.require(worst_a <= 1e-12, fmt("max relative error of A_k vs -1/(2 sigma^2) = %.3e", worst_a));
  out.require(worst_d <= 1e-12, fmt("max relative error of D_{N-i} vs (i+1) lambda = %.3e", worst_d));
}

// --- 7. Grid oracle cross-check ------------------------------------------
void grid_cross_check(Outcome& out) {
  std::mt19937_64 rng(20117);
  std::size_t outside = 0;
  double worst_steps = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = testing::random_instance(rng, 6, {1.0, 10.0}, {1e-3, 1e-2, 1e-1});
    const Grid grid = default_grid(inst.u, inst.sigma, 4096);
    const double x = grid_max_marginal(inst.u, inst.lambda, inst.sigma, grid);
    const double fg = backtrack_estimate(inst.u, inst.lambda, inst.sigma).final_estimate();
    const double steps = std::abs(x - fg) / grid.step();
    worst_steps = std::max(worst_steps, steps);
    outside += steps > 1.0;
  }
  out.require(outside == 0,
              fmtn("grid argmax within one step of backtrack on 100 instances "
                   "(%zu outside, worst %.3f steps)",
                   outside, worst_steps));
  out.note("grid error is O(step) but can exceed one step: binding constraints snap down "
           "to the grid and sub-step tail increments are not representable");
}

// --- 8. Sweep determinism ------------------------------------------------
void sweep_determinism(Outcome& out) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fgclock_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  std::ostringstream sink;
  cli::Options first;
  first.axis = "rounds";
  first.trials = 2000;
  first.seed = 20118;
  first.out = (dir / "seed.csv").string();
  int rc = cli::cmd_sweep(first, sink, sink);
  out.require(rc == cli::kExitOk, "initial sweep writes a manifest");

  std::string csv[2];
  for (int run = 0; run < 2; ++run) {
    cli::Options again;
    again.axis = "rounds";
    again.config = (dir / "seed.manifest.json").string();
    again.workers = run == 0 ? 1u : 4u;
    again.out = (dir / ("run" + std::to_string(run) + ".csv")).string();
    rc = cli::cmd_sweep(again, sink, sink);
    out.require(rc == cli::kExitOk, fmtn("re-run %d from manifest exits 0", run + 1));
    csv[run] = slurp(*again.out);
  }
  out.require(!csv[0].empty() && csv[0] == csv[1],
              fmtn("two runs from the same manifest are byte-identical (%zu bytes)", csv[0].size()));
  out.require(csv[0] == slurp(dir / "seed.csv"), "manifest re-run reproduces the original CSV");
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fgclock acceptance suite"};
  std::vector<int> only;
  app.add_option("--criterion", only, "Criterion number(s) to run (default: all)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence (backtrack vs exact MAP)", 30.0, oracle_equivalence},
      {2, "ML limit identity", 5.0, ml_limit},
      {3, "MSE vs rounds: FGE beats ML, ML degrades with N", 120.0, fig_rounds},
      {4, "MSE vs sigma: FGE -> ML as sigma -> 0, FGE beats ML at 1e-1", 120.0, fig_sigma},
      {5, "min-distributivity and monotonicity of the shift kernel", 2.0, lemma_one},
      {6, "backward-constant closed forms up to N = 1000", 1.0, constants_closed_form},
      {7, "grid max-product cross-check", 30.0, grid_cross_check},
      {8, "sweep determinism from a manifest", 60.0, sweep_determinism},
  };

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome outcome;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(outcome);
    } catch (const std::exception& e) {
      outcome.require(false, std::string("threw: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    outcome.require(secs <= c.time_limit_s, fmtn("runtime %.2f s <= %.0f s", secs, c.time_limit_s));
    all_pass = all_pass && outcome.pass;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.title
              << '\n';
    for (const auto& d : outcome.details) std::cout << "         " << d << '\n';
    std::cout.flush();
  }
  return all_pass ? 0 : 1;
}
