#pragma once

#include <string>
#include <vector>

#include "logsweep/core/errors.hpp"
#include "logsweep/harness/config.hpp"
#include "logsweep/harness/experiment.hpp"

namespace logsweep {

/// Shipped experiment configurations, one per registered experiment id.
inline ExperimentConfig preset(const std::string& id) {
  const ExperimentDef& def = find_experiment(id);
  ExperimentConfig c;
  c.command = def.command;
  c.experiment = id;
  c.grid = {1000, 10000, 100000};
  c.a = 1.0;
  c.b = 0.2;
  c.replicates = 200;
  c.seed = 20240601;
  auto zero = [&c](const std::string& stat, double threshold) { c.checks.push_back({stat, 0.0, threshold}); };

  if (def.command == "sweep") {
    c.statement = "sweep-house-limit";
    double t0 = 1.6;
    if (id == "tent") {
      c.statement = "sweep-tent-limit-quasi-strong";
      c.phi_rule = "inverse_log";
      t0 = 2.0;
    } else if (id == "strong") {
      c.statement = "sweep-tent-limit-strong";
      c.phi_rule = "constant";
      c.phi = 1.0;
      t0 = 2.0;
    }
    c.checks.push_back({"sigma_fix", t0, 0.2 * t0});
    zero("sup_d1", 0.3);
    zero("sup_d0", 0.3);
    zero("m1_h1", 0.15);
    zero("m1_h0", 0.15);
  } else if (def.command == "phases") {
    if (id == "growth-from-power") {
      c.statement = "log-linear-growth-from-power-level";
      c.beta = 0.5;
      c.horizon = 0.5;
      zero("growth_dev", 0.15);
    } else if (id == "decline-from-power") {
      c.statement = "log-linear-decline-from-power-level";
      c.beta = 0.9;
      zero("decline_dev", 0.15);
    } else {
      const char* names[] = {"phase1-negligible-establishment", "phase2-log-linear-growth",
                             "phase3-negligible-takeover", "phase4-log-linear-decline",
                             "phase5-negligible-extinction"};
      const int k = id.back() - '0';
      c.statement = names[k - 1];
      // Phase 2 starts at log_N floor(log N / phi) = b + log log N / log N, an
      // offset of about 0.21 at N = 1e5, so its threshold sits above it.
      if (k == 2) c.horizon = 0.4;
      const double thresholds[] = {0.5, 0.25, 0.5, 0.15, 0.5};
      zero(id, thresholds[k - 1]);
    }
  } else if (id == "embedded-m1") {
    c.statement = "embedded-growth-and-decline-m1";
    c.replicates = 100;
    zero("m1_y1", 0.15);
    zero("m1_y0", 0.15);
  } else if (id == "axioms") {
    c.statement = "m1-metric-axioms";
    c.grid = {3, 4, 5};
    c.replicates = 100;
    zero("self", 2.0 * c.tol);
    zero("asymmetry", 2.0 * c.tol);
    zero("triangle_excess", 2.0 * c.tol);
  } else if (def.command == "walks") {
    c.replicates = 500;
    if (id == "drawdown-up") {
      c.statement = "conditioned-walk-up-drawdown";
      zero("drawdown_up", 0.3);
    } else if (id == "drawdown-down") {
      c.statement = "walk-down-drawdown";
      zero("drawdown_down", 0.3);
    } else {
      c.statement = "bessel-walk-log-fluctuation";
      zero("lil_fluctuation", 0.3);
    }
  } else if (def.command == "clonal") {
    c.statement = "clonal-interference-pit-limit";
    c.b = 0.3;
    c.lambda = 1.0;
    c.gamma = GammaSpec::finite({1.0, 2.0}, {1.0, 1.0});
    c.horizon = 4.0;
    c.replicates = 100;
    c.grid = {1000, 3162, 10000};
    if (id == "clonal-strong") {
      c.statement = "clonal-interference-pit-limit-strong";
      c.phi_rule = "constant";
      c.phi = 1.0;
      c.grid = {1000, 10000, 100000};
    }
    zero("m1_max", 0.3);
  }
  return c;
}

inline std::vector<std::string> preset_ids(const std::string& command = "") {
  std::vector<std::string> out;
  for (const auto& d : experiment_registry()) {
    if (command.empty() || d.command == command) out.push_back(d.id);
  }
  return out;
}

}  // namespace logsweep
