#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/errors.hpp"
#include "fgclock/table_io.hpp"

namespace fgclock::cli {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ParameterError(field, "expected a number");
  return j.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    throw ParameterError(field, "must be a non-negative integer");
  }
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (x >= 0.0 && std::floor(x) == x && x < 1.8e19)
      return static_cast<std::uint64_t>(x);
  }
  throw ParameterError(field, "must be a non-negative integer");
}

void apply_object(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw ParameterError("config", "expected a JSON object");
  auto& p = cfg.params();
  for (const auto& [key, value] : doc.items()) {
    if (key == "lambda_xi") {
      p.lambda_xi = get_number(value, key);
    } else if (key == "lambda_psi") {
      p.lambda_psi = get_number(value, key);
    } else if (key == "sigma") {
      p.sigma = get_number(value, key);
    } else if (key == "d0") {
      p.d0 = get_number(value, key);
    } else if (key == "theta0") {
      p.theta0 = get_number(value, key);
    } else if (key == "rounds") {
      p.rounds = get_count(value, key);
    } else if (key == "seed") {
      cfg.sweep.master_seed = get_count(value, key);
    } else if (key == "trials") {
      cfg.sweep.trials = get_count(value, key);
    } else if (key == "workers") {
      cfg.sweep.workers = static_cast<unsigned>(get_count(value, key));
    } else if (key == "rounds_list") {
      if (!value.is_array()) throw ParameterError(key, "expected an array");
      cfg.sweep.rounds_list.clear();
      for (const auto& v : value) cfg.sweep.rounds_list.push_back(get_count(v, key));
    } else if (key == "sigma_list") {
      if (!value.is_array()) throw ParameterError(key, "expected an array");
      cfg.sweep.sigma_list.clear();
      for (const auto& v : value) cfg.sweep.sigma_list.push_back(get_number(v, key));
    } else if (key == "estimators") {
      if (!value.is_array()) throw ParameterError(key, "expected an array");
      cfg.sweep.estimators.clear();
      for (const auto& v : value) {
        if (!v.is_string()) throw ParameterError(key, "expected estimator tags");
        try {
          cfg.sweep.estimators.push_back(parse_estimator(v.get<std::string>()));
        } catch (const UsageError& e) {
          throw ParameterError(key, e.what());
        }
      }
    } else {
      throw ParameterError(key, "unknown configuration field");
    }
  }
}

}  // namespace

std::string artifact_version() { return FGCLOCK_VERSION; }

RunConfig default_config() {
  RunConfig cfg;
  cfg.sweep.rounds_list.clear();
  for (std::size_t n = 2; n <= 25; ++n) cfg.sweep.rounds_list.push_back(n);
  cfg.sweep.sigma_list = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  return cfg;
}

void apply_json(RunConfig& cfg, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  // Manifests carry the resolved config one level down.
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) {
    apply_object(cfg, doc["config"]);
  } else {
    apply_object(cfg, doc);
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_json(cfg, text.str());
}

std::string config_to_json(const RunConfig& cfg, int indent) {
  const auto& p = cfg.params();
  json estimators = json::array();
  for (auto e : cfg.sweep.estimators) estimators.push_back(std::string(to_string(e)));
  json doc = {
      {"lambda_xi", p.lambda_xi},
      {"lambda_psi", p.lambda_psi},
      {"sigma", p.sigma},
      {"d0", p.d0},
      {"theta0", p.theta0},
      {"rounds", p.rounds},
      {"seed", cfg.sweep.master_seed},
      {"trials", cfg.sweep.trials},
      {"rounds_list", cfg.sweep.rounds_list},
      {"sigma_list", cfg.sweep.sigma_list},
      {"estimators", std::move(estimators)},
  };
  return doc.dump(indent);
}

std::string manifest_to_json(const Manifest& m) {
  json doc = {
      {"subcommand", m.subcommand},
      {"version", artifact_version()},
      {"seed", m.config.seed()},
      {"config", json::parse(config_to_json(m.config))},
      {"outputs", m.outputs},
  };
  if (m.subcommand == "simulate") {
    doc["negative_delay_rounds"] = m.negative_delay_rounds;
  }
  return doc.dump(2) + "\n";
}

}  // namespace fgclock::cli
