#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "cli/errors.hpp"
#include "fgclock/estimators.hpp"
#include "fgclock/oracle.hpp"
#include "fgclock/random.hpp"
#include "fgclock/table_io.hpp"

namespace fgclock::cli {

namespace {

using nlohmann::json;

RunConfig resolve_config(const Options& opts) {
  RunConfig cfg = default_config();
  if (opts.config) load_config_file(cfg, *opts.config);
  auto& p = cfg.params();
  if (opts.lambda_xi) p.lambda_xi = *opts.lambda_xi;
  if (opts.lambda_psi) p.lambda_psi = *opts.lambda_psi;
  if (opts.sigma) p.sigma = *opts.sigma;
  if (opts.rounds) p.rounds = *opts.rounds;
  if (opts.seed) cfg.sweep.master_seed = *opts.seed;
  if (opts.trials) cfg.sweep.trials = *opts.trials;
  if (opts.workers) cfg.sweep.workers = *opts.workers;
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return path.substr(0, dot);
  return path;
}

// Runs `body`, mapping exceptions onto exit codes with a one-line message.
int guarded(const char* name, std::ostream& err, const std::function<int()>& body) {
  const auto report = [&](const char* kind, const std::exception& e) {
    err << "fgclock " << name << ": " << kind << ": " << e.what() << '\n';
  };
  try {
    return body();
  } catch (const UsageError& e) {
    report("usage error", e);
    return kExitUsage;
  } catch (const IoError& e) {
    report("I/O error", e);
    return kExitIo;
  } catch (const ConvergenceError& e) {
    report("convergence error", e);
    return kExitNumerical;
  } catch (const CoverageError& e) {
    report("coverage error", e);
    return kExitNumerical;
  } catch (const Error& e) {
    report("invalid input", e);
    return kExitValidation;
  } catch (const std::exception& e) {
    report("internal error", e);
    return kExitInternal;
  }
}

std::vector<Variant> selected_variants(const std::string& flag) {
  if (flag == "all") return {Variant::kRecursive, Variant::kPaper, Variant::kMl};
  return {parse_variant(flag)};
}

}  // namespace

int cmd_simulate(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded("simulate", err, [&] {
    RunConfig cfg = resolve_config(opts);
    cfg.params().validate();
    const std::string prefix = opts.out.value_or("fgclock");

    const std::uint64_t seed = cfg.seed();
    const LatentPath path =
        simulate_paths(cfg.params(), derive_seed(seed, {kPathStream}));
    const ObservationSeries obs = simulate_observations(
        path, cfg.params(), derive_seed(seed, {kObservationStream}));

    std::ostringstream obs_csv, path_csv;
    write_observations_csv(obs_csv, obs);
    write_path_csv(path_csv, path);

    Manifest manifest{"simulate", cfg,
                      {prefix + "_observations.csv", prefix + "_path.csv",
                       prefix + "_manifest.json"},
                      path.negative_delay_rounds};
    write_file(manifest.outputs[0], obs_csv.str());
    write_file(manifest.outputs[1], path_csv.str());
    write_file(manifest.outputs[2], manifest_to_json(manifest));

    if (path.negative_delay_rounds > 0) {
      err << "fgclock simulate: warning: delay d_k < 0 in "
          << path.negative_delay_rounds << " round(s)\n";
    }
    for (const auto& f : manifest.outputs) out << f << '\n';
    return kExitOk;
  });
}

int cmd_estimate(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded("estimate", err, [&] {
    if (!opts.input) throw UsageError("an input CSV with columns k,U,V is required");
    const RunConfig cfg = resolve_config(opts);
    const auto variants = selected_variants(opts.variant);

    std::ifstream in(*opts.input);
    if (!in) throw IoError("cannot open input '" + *opts.input + "'");
    ObservationSeries obs;
    try {
      obs = read_observations_csv(in);
    } catch (const ParseError& e) {
      throw ParseError(*opts.input + ": " + e.what());
    }

    const auto& p = cfg.params();
    json estimates = json::array();
    for (Variant v : variants) {
      const OffsetEstimate est =
          fge_offset(obs.u, obs.v, p.lambda_xi, p.lambda_psi, p.sigma, v);
      estimates.push_back({{"variant", std::string(to_string(v))},
                           {"theta_hat", est.theta_hat_n},
                           {"xi_hat", est.xi_hat_n},
                           {"psi_hat", est.psi_hat_n}});
    }
    json doc = {{"rounds", obs.rounds()},
                {"lambda_xi", p.lambda_xi},
                {"lambda_psi", p.lambda_psi},
                {"sigma", p.sigma},
                {"estimates", std::move(estimates)}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded("sweep", err, [&] {
    if (!opts.axis) throw UsageError("--axis {rounds,sigma} is required");
    const SweepAxis axis = parse_axis(*opts.axis);
    RunConfig cfg = resolve_config(opts);
    if (axis == SweepAxis::kRounds && opts.rounds) {
      // --rounds R on the rounds axis sweeps N = 2..R.
      cfg.sweep.rounds_list.clear();
      for (std::size_t n = std::min<std::size_t>(2, *opts.rounds);
           n <= *opts.rounds; ++n)
        cfg.sweep.rounds_list.push_back(n);
    }
    cfg.params().validate();
    cfg.sweep.validate(axis);

    const std::string csv_path = opts.out.value_or("sweep.csv");
    const std::string stem = stem_of(csv_path);
    Manifest manifest{"sweep", cfg,
                      {csv_path, stem + ".json", stem + ".manifest.json"}};

    const MseTable table = run_sweep(cfg.sweep, axis);
    std::ostringstream csv;
    write_mse_csv(csv, table);
    write_file(manifest.outputs[0], csv.str());
    write_file(manifest.outputs[1], mse_to_json(table) + "\n");
    write_file(manifest.outputs[2], manifest_to_json(manifest));

    int code = kExitOk;
    for (const auto& row : table.rows) {
      if (!row.ok()) {
        err << "fgclock sweep: cell " << format_double(row.axis) << '/'
            << to_string(row.estimator) << " failed: " << row.error << '\n';
        code = kExitNumerical;
      }
    }
    for (const auto& f : manifest.outputs) out << f << '\n';
    return code;
  });
}

int cmd_compare_oracle(const Options& opts, std::ostream& out,
                       std::ostream& err) {
  return guarded("compare-oracle", err, [&] {
    RunConfig cfg = resolve_config(opts);
    if (!opts.rounds) cfg.params().rounds = 8;
    const std::size_t n = cfg.params().rounds;
    if (n > kMaxEnumerationRounds) {
      throw UsageError("--rounds must be <= " +
                       std::to_string(kMaxEnumerationRounds) +
                       " for the exact oracle");
    }
    cfg.params().validate();
    const std::size_t instances = opts.instances.value_or(1000);
    if (instances < 1) throw UsageError("--instances must be >= 1");

    const auto& p = cfg.params();
    struct Worst {
      double deviation = 0.0;
      std::uint64_t seed = 0;
      std::size_t index = 0;
    };
    Worst recursive, paper;
    for (std::size_t i = 0; i < instances; ++i) {
      const std::uint64_t seed = derive_seed(cfg.seed(), {i});
      const LatentPath path = simulate_paths(p, derive_seed(seed, {kPathStream}));
      const ObservationSeries obs =
          simulate_observations(path, p, derive_seed(seed, {kObservationStream}));
      const double exact =
          exact_map_active_set(obs.u, p.lambda_xi, p.sigma).final_estimate();
      const double rec =
          backtrack_estimate(obs.u, p.lambda_xi, p.sigma).final_estimate();
      const double pap = closed_form_estimate_paper(obs.u, p.lambda_xi, p.sigma);
      const double d_rec = std::abs(rec - exact);
      const double d_pap = std::abs(pap - exact);
      if (i == 0 || d_rec > recursive.deviation) recursive = {d_rec, seed, i};
      if (i == 0 || d_pap > paper.deviation) paper = {d_pap, seed, i};
    }

    out << "compare-oracle: rounds=" << n << " instances=" << instances
        << " lambda=" << format_double(p.lambda_xi)
        << " sigma=" << format_double(p.sigma) << " seed=" << cfg.seed()
        << '\n';
    out << std::left << std::setw(12) << "estimator" << std::setw(26)
        << "max_abs_dev_from_oracle" << std::setw(22) << "instance_seed"
        << "instance_index\n";
    for (const auto& [name, w] :
         {std::pair<const char*, Worst>{"recursive", recursive},
          std::pair<const char*, Worst>{"paper", paper}}) {
      out << std::left << std::setw(12) << name << std::setw(26)
          << format_double(w.deviation) << std::setw(22) << w.seed << w.index
          << '\n';
    }
    return kExitOk;
  });
}

}  // namespace fgclock::cli
