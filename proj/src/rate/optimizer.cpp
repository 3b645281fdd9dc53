#include <algorithm>
#include "lillab/rate/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lillab/error.hpp"
#include "lillab/parallel.hpp"
#include "lillab/random/gaussian.hpp"
#include "lillab/simd/kernels.hpp"

namespace lillab::rate {

Sense parse_sense(const std::string& name) {
  if (name == "max" || name == "maximize") return Sense::maximize;
  if (name == "min" || name == "minimize") return Sense::minimize;
  throw InvalidInput("unknown sense '" + name + "'");
}

std::string sense_name(Sense sense) { return sense == Sense::maximize ? "max" : "min"; }

nlohmann::json ExtremalResult::to_json(bool include_control) const {
  nlohmann::json j;
  j["value"] = value;
  j["sense"] = sense_name(sense);
  j["n_restarts_used"] = n_restarts_used;
  j["converged"] = converged;
  j["gradient_norm_at_exit"] = gradient_norm_at_exit;
  j["energy"] = argext.energy();
  j["restarts"] = nlohmann::json::array();
  for (const auto& r : restarts)
    j["restarts"].push_back({{"index", r.index},
                             {"value", r.value},
                             {"iterations", r.iterations},
                             {"converged", r.converged},
                             {"gradient_norm", r.gradient_norm}});
  if (include_control) {
    j["argext"] = {{"n_steps", argext.n_steps()},
                   {"dim", argext.dim()},
                   {"u", std::vector<double>(argext.values().begin(), argext.values().end())}};
  }
  return j;
}

double evaluate_control(const LimitOdeProblem& problem, const PathFunctional& functional, const ControlGrid& u) {
  const auto path = solve_control_ode(problem, u);
  return functional.value(path);
}

ControlGrid fd_gradient(const std::function<double(const ControlGrid&)>& objective, const ControlGrid& u, double h) {
  require(h > 0.0, "fd_gradient: step must be positive");
  ControlGrid grad(u.n_steps(), u.dim());
  ControlGrid probe = u;
  for (std::size_t i = 0; i < u.values().size(); ++i) {
    const double base = probe.values()[i];
    probe.values()[i] = base + h;
    const double fp = objective(probe);
    probe.values()[i] = base - h;
    const double fm = objective(probe);
    probe.values()[i] = base;
    grad.values()[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

ControlGrid objective_gradient(const LimitOdeProblem& problem, const PathFunctional& functional,
                               const ControlGrid& u, double fd_step) {
  if (functional.gradient) {
    const auto path = solve_control_ode(problem, u);
    return control_gradient(problem, u, path, functional.gradient(path));
  }
  double scale = 1.0;
  for (double v : u.values()) scale = std::max(scale, std::abs(v));
  return fd_gradient([&](const ControlGrid& c) { return evaluate_control(problem, functional, c); }, u,
                     fd_step * scale);
}

ControlGrid random_control(std::size_t n_steps, std::size_t dim, std::size_t modes, std::uint64_t seed,
                           std::uint64_t lane, double energy) {
  require(modes >= 1, "random_control: need at least one mode");
  random::GaussianStream stream(seed, random::kStreamOptimizer);
  std::vector<double> coef(2 * modes * dim);
  stream.normals(lane, 0, coef);
  ControlGrid u(n_steps, dim);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t = (double(n) + 0.5) / double(n_steps);
    for (std::size_t i = 0; i < dim; ++i) {
      double v = 0.0;
      for (std::size_t m = 0; m < modes; ++m) {
        const double a = coef[(i * modes + m) * 2];
        const double b = coef[(i * modes + m) * 2 + 1];
        v += (a * std::cos(double(m) * std::numbers::pi * t) + b * std::sin(double(m + 1) * std::numbers::pi * t)) /
             double(m + 1);
      }
      u.step(n)[i] = v;
    }
  }
  const double e = u.energy();
  if (e > 0.0 && energy > 0.0) simd::scale(std::sqrt(energy / e), u.values());
  if (energy == 0.0) simd::scale(0.0, u.values());
  return project_energy_ball(std::move(u), std::max(energy, 1e-300));
}

namespace {

struct RestartOutcome {
  RestartRecord record;
  ControlGrid control{1, 1};
  bool finite = false;
};

double l2_norm(const ControlGrid& g) { return std::sqrt(simd::sum_squares(g.values()) / double(g.n_steps())); }

// Projected gradient ascent on sign * F.
RestartOutcome run_restart(const LimitOdeProblem& problem, const PathFunctional& functional, double sign,
                           const OptimizerConfig& cfg, std::size_t index) {
  RestartOutcome out;
  out.record.index = index;
  const std::size_t k = problem.dim_noise();
  ControlGrid u = random_control(cfg.n_steps, k, cfg.init_modes, cfg.seed, index, 1.0);
  auto objective = [&](const ControlGrid& c) {
    const double v = evaluate_control(problem, functional, c);
    return std::isfinite(v) ? sign * v : -kInfinity;
  };
  double f = objective(u);
  if (!std::isfinite(f)) {
    // Shrink towards the zero control until the functional is defined.
    for (int i = 0; i < 60 && !std::isfinite(f); ++i) {
      simd::scale(0.5, u.values());
      f = objective(u);
    }
    if (!std::isfinite(f)) return out;
  }
  const double n_scale = double(cfg.n_steps);
  auto l2_gradient = [&](const ControlGrid& c) {
    ControlGrid g = objective_gradient(problem, functional, c, cfg.fd_step);
    simd::scale(sign * n_scale, g.values());
    return g;
  };
  ControlGrid grad = l2_gradient(u);
  double eta = cfg.initial_step;
  std::size_t stall = 0;
  std::size_t it = 0;
  double pg = kInfinity;
  bool converged = false;
  for (; it < cfg.max_iterations; ++it) {
    // Projected-gradient map with unit step as the stationarity measure.
    ControlGrid probe = u;
    simd::axpy(1.0, grad.values(), probe.values());
    probe = project_energy_ball(std::move(probe));
    simd::axpy(-1.0, u.values(), probe.values());
    pg = l2_norm(probe);
    if (pg <= cfg.tolerance * (1.0 + l2_norm(grad))) {
      converged = true;
      break;
    }
    ControlGrid cand = u;
    simd::axpy(eta, grad.values(), cand.values());
    cand = project_energy_ball(std::move(cand));
    const double fc = objective(cand);
    if (fc > f) {
      const double gain = fc - f;
      ControlGrid step = cand;
      simd::axpy(-1.0, u.values(), step.values());
      u = std::move(cand);
      f = fc;
      ControlGrid next = l2_gradient(u);
      // Barzilai-Borwein length from the last accepted step; doubling when the
      // local curvature along the step is not negative.
      ControlGrid dg = next;
      simd::axpy(-1.0, grad.values(), dg.values());
      const double ss = simd::sum_squares(step.values());
      const double sy = simd::dot(step.values(), dg.values());
      grad = std::move(next);
      eta = sy < 0.0 ? std::clamp(-ss / sy, 1e-10, 1e8) : std::min(eta * 2.0, 1e8);
      stall = gain <= 1e-15 * (1.0 + std::abs(f)) ? stall + 1 : 0;
      if (stall >= 5) {
        converged = true;
        break;
      }
    } else {
      eta *= 0.5;
      if (eta < 1e-14) {
        // No ascent at any representable step: stationary up to roundoff.
        converged = pg <= 1e-5 * (1.0 + l2_norm(grad));
        break;
      }
    }
  }
  out.record.iterations = it;
  out.record.converged = converged;
  out.record.gradient_norm = pg;
  out.record.value = sign * f;
  out.control = std::move(u);
  out.finite = true;
  return out;
}

}  // namespace

ExtremalResult optimize_extremal(const LimitOdeProblem& problem, const PathFunctional& functional, Sense sense,
                                 const OptimizerConfig& config) {
  problem.validate();
  require(bool(functional.value), "optimize_extremal: functional callback missing");
  require(config.n_steps >= 2 && config.restarts >= 1, "optimize_extremal: need N >= 2 and restarts >= 1");
  const double sign = sense == Sense::maximize ? 1.0 : -1.0;
  std::vector<RestartOutcome> outcomes(config.restarts);
  parallel_for(config.restarts, config.threads,
               [&](std::size_t r) { outcomes[r] = run_restart(problem, functional, sign, config, r); });

  ExtremalResult result;
  result.sense = sense;
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.restarts.push_back(outcomes[r].record);
    if (!outcomes[r].finite) continue;
    if (!best || sign * outcomes[r].record.value > sign * outcomes[*best].record.value) best = r;
  }
  if (!best) {
    std::ostringstream diag;
    diag << "all " << config.restarts << " restarts produced undefined functional values";
    throw NonConvergence("optimize_extremal: no restart converged", diag.str());
  }
  const auto& b = outcomes[*best];
  result.argext = b.control;
  result.value = evaluate_control(problem, functional, result.argext);
  result.converged = b.record.converged;
  result.gradient_norm_at_exit = b.record.gradient_norm;
  result.n_restarts_used = config.restarts;
  return result;
}

}  // namespace lillab::rate
