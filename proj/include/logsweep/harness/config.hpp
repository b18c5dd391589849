#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "logsweep/core/errors.hpp"
#include "logsweep/model_params.hpp"
#include "logsweep/multi_moran.hpp"

namespace logsweep {

inline constexpr int kConfigSchemaVersion = 1;

/// One convergence verdict to evaluate on a statistic column.
struct Check {
  std::string statistic;
  /// Limit of the median as N grows (0 for "zero").
  double target = 0.0;
  /// Largest admissible |median - target| at the last grid point.
  double threshold = 0.0;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  /// sweep, phases, m1, walks or clonal.
  std::string command;
  /// Preset id selecting the experiment.
  std::string experiment;
  /// Name of the statement the experiment probes.
  std::string statement;
  std::vector<std::int64_t> grid;
  double a = 1.0;
  double b = 0.2;
  /// power, inverse_log or constant.
  std::string phi_rule = "power";
  /// phi for the constant rule.
  double phi = 1.0;
  double lambda = 1.0;
  GammaSpec gamma = GammaSpec::finite({1.0}, {1.0});
  /// Start exponent of the growth and decline deviation statistics.
  double beta = 0.5;
  std::size_t replicates = 100;
  std::uint64_t seed = 1;
  std::string out = "logsweep-out";
  double eps = 0.1;
  double tol = 1e-3;
  std::optional<double> horizon;
  double record_delta = 0.01;
  std::uint64_t cap = 1'000'000'000ULL;
  std::vector<Check> checks;
};

inline ModelParams make_params(const ExperimentConfig& c, std::int64_t n) {
  if (c.phi_rule == "power") return ModelParams::power_law(n, c.a, c.b);
  if (c.phi_rule == "inverse_log") return ModelParams::inverse_log(n, c.a);
  if (c.phi_rule == "constant") return ModelParams(n, c.a, c.phi, PhiRule::constant);
  throw PreconditionError("unknown phi_rule '" + c.phi_rule + "'");
}

inline nlohmann::json gamma_to_json(const GammaSpec& g) {
  switch (g.kind()) {
    case GammaSpec::Kind::finite: return {{"kind", "finite"}, {"values", g.values()}, {"weights", g.weights()}};
    case GammaSpec::Kind::uniform: return {{"kind", "uniform"}, {"lo", g.lo()}, {"hi", g.hi()}};
    case GammaSpec::Kind::exponential: return {{"kind", "exponential"}, {"mean", g.mean()}};
  }
  return {};
}

inline GammaSpec gamma_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite") {
    return GammaSpec::finite(j.at("values").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>());
  }
  if (kind == "uniform") return GammaSpec::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (kind == "exponential") return GammaSpec::exponential(j.at("mean").get<double>());
  throw PreconditionError("unknown gamma kind '" + kind + "'");
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["command"] = c.command;
  j["experiment"] = c.experiment;
  j["statement"] = c.statement;
  j["grid"] = c.grid;
  j["a"] = c.a;
  j["b"] = c.b;
  j["phi_rule"] = c.phi_rule;
  j["phi"] = c.phi;
  j["lambda"] = c.lambda;
  j["gamma"] = gamma_to_json(c.gamma);
  j["beta"] = c.beta;
  j["replicates"] = c.replicates;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["eps"] = c.eps;
  j["tol"] = c.tol;
  j["horizon"] = c.horizon ? nlohmann::json(*c.horizon) : nlohmann::json(nullptr);
  j["record_delta"] = c.record_delta;
  j["cap"] = c.cap;
  j["checks"] = nlohmann::json::array();
  for (const auto& ch : c.checks) {
    j["checks"].push_back({{"statistic", ch.statistic}, {"target", ch.target}, {"threshold", ch.threshold}});
  }
  return j;
}

/// Reads a config; absent keys keep their defaults, unknown keys are errors.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  require(j.is_object(), "config must be a JSON object");
  static const char* known[] = {"schema_version", "command", "experiment", "statement", "grid", "a", "b",
                                "phi_rule", "phi", "lambda", "gamma", "beta", "replicates", "seed", "out",
                                "eps", "tol", "horizon", "record_delta", "cap", "checks"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    require(ok, "unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  c.schema_version = j.value("schema_version", kConfigSchemaVersion);
  require(c.schema_version == kConfigSchemaVersion,
          "unsupported config schema_version " + std::to_string(c.schema_version));
  c.command = j.value("command", c.command);
  c.experiment = j.value("experiment", c.experiment);
  c.statement = j.value("statement", c.statement);
  if (j.contains("grid")) c.grid = j.at("grid").get<std::vector<std::int64_t>>();
  c.a = j.value("a", c.a);
  c.b = j.value("b", c.b);
  c.phi_rule = j.value("phi_rule", c.phi_rule);
  c.phi = j.value("phi", c.phi);
  c.lambda = j.value("lambda", c.lambda);
  if (j.contains("gamma")) c.gamma = gamma_from_json(j.at("gamma"));
  c.beta = j.value("beta", c.beta);
  c.replicates = j.value("replicates", c.replicates);
  c.seed = j.value("seed", c.seed);
  c.out = j.value("out", c.out);
  c.eps = j.value("eps", c.eps);
  c.tol = j.value("tol", c.tol);
  if (j.contains("horizon") && !j.at("horizon").is_null()) c.horizon = j.at("horizon").get<double>();
  c.record_delta = j.value("record_delta", c.record_delta);
  c.cap = j.value("cap", c.cap);
  if (j.contains("checks")) {
    for (const auto& e : j.at("checks")) {
      Check ch;
      ch.statistic = e.at("statistic").get<std::string>();
      const auto& t = e.at("target");
      ch.target = t.is_string() ? (t.get<std::string>() == "zero" ? 0.0 : throw PreconditionError("bad target"))
                                : t.get<double>();
      ch.threshold = e.at("threshold").get<double>();
      c.checks.push_back(ch);
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace logsweep
