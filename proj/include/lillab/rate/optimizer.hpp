#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lillab/rate/limit_ode.hpp"

namespace lillab::rate {

enum class Sense { maximize, minimize };

Sense parse_sense(const std::string& name);
std::string sense_name(Sense sense);

struct PathFunctional {
  std::string name;
  std::function<double(const sde::ExplosivePath&)> value;
  // dF/dg_n at every alive node; when empty the optimizer falls back to
  // central finite differences on u.
  std::function<std::vector<Vec>(const sde::ExplosivePath&)> gradient;
};

struct OptimizerConfig {
  std::size_t n_steps = 1024;
  std::size_t restarts = 16;
  std::size_t max_iterations = 2000;
  double initial_step = 1.0;  // in L2 units of u
  double fd_step = 1e-6;      // relative, fallback gradient only
  double tolerance = 1e-9;    // projected gradient norm, relative to 1 + |grad|
  std::size_t init_modes = 8;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct RestartRecord {
  std::size_t index = 0;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

struct ExtremalResult {
  double value = 0.0;
  ControlGrid argext{1, 1};
  Sense sense = Sense::maximize;
  std::size_t n_restarts_used = 0;
  bool converged = false;
  double gradient_norm_at_exit = 0.0;
  std::vector<RestartRecord> restarts;

  nlohmann::json to_json(bool include_control = true) const;
};

ExtremalResult optimize_extremal(const LimitOdeProblem& problem, const PathFunctional& functional, Sense sense,
                                 const OptimizerConfig& config);

// Objective value of a control (nan when the functional is undefined).
double evaluate_control(const LimitOdeProblem& problem, const PathFunctional& functional, const ControlGrid& u);

// Euclidean gradient of the objective with respect to u (adjoint when the
// functional supplies node gradients, else finite differences).
ControlGrid objective_gradient(const LimitOdeProblem& problem, const PathFunctional& functional,
                               const ControlGrid& u, double fd_step);

// Central differences: (F(u + h e_i) - F(u - h e_i)) / 2h with absolute step h.
ControlGrid fd_gradient(const std::function<double(const ControlGrid&)>& objective, const ControlGrid& u, double h);

// Smooth random control of the given energy (deterministic in seed and lane).
ControlGrid random_control(std::size_t n_steps, std::size_t dim, std::size_t modes, std::uint64_t seed,
                           std::uint64_t lane, double energy);

}  // namespace lillab::rate
