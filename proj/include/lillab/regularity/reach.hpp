#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lillab/rate/optimizer.hpp"

namespace lillab::regularity {

enum class ReachVerdict { reachable, unreachable, indeterminate };
std::string reach_verdict_name(ReachVerdict v);

struct ReachConfig {
  double tolerance = 1e-6;  // terminal miss counted as a hit
  rate::OptimizerConfig optimizer = [] {
    rate::OptimizerConfig c;
    c.n_steps = 256;
    c.restarts = 4;
    c.max_iterations = 1000;
    c.tolerance = 1e-10;
    return c;
  }();
};

// For a driftless coordinate i with constant noise row s_i:
// |g_i(t) - x_i| <= |s_i| sqrt(2 t) on the energy ball.
struct EnergyCertificate {
  std::size_t coordinate = 0;
  double bound = 0.0;     // |s_i| sqrt(2 t)
  double required = 0.0;  // |z_i - x_i|
};

struct ReachReport {
  ReachVerdict verdict = ReachVerdict::indeterminate;
  double best_miss = kInfinity;
  double t = 1.0;
  Vec target;
  std::optional<rate::ControlGrid> control;  // best control found
  std::optional<EnergyCertificate> certificate;
  bool optimizer_converged = false;

  nlohmann::json to_json(bool include_control = false) const;
};

std::optional<EnergyCertificate> energy_certificate(const rate::LimitOdeProblem& problem, const Vec& z, double t);

// Minimises |S_x^t(f) - z|^2 over the energy ball.
ReachReport reach_target(const rate::LimitOdeProblem& problem, const Vec& z, double t, const ReachConfig& config = {});

}  // namespace lillab::regularity
