#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lillab/rate/control_grid.hpp"
#include "lillab/sde/path.hpp"
#include "lillab/sde/system.hpp"

namespace lillab::rate {

// dg/dt = b(g) + sigma(g) fdot on [0, t_star], g(0) = x0.
struct LimitOdeProblem {
  sde::DriftFn drift;
  sde::DiffusionFn diffusion;
  Vec x0;
  sde::DomainFn domain_contains;  // empty means every finite state
  double t_star = 1.0;

  // Optional structure used for speed and certificates.
  std::function<Mat(const Vec&)> drift_jacobian;
  std::optional<Mat> constant_diffusion;
  std::vector<bool> driftless;  // b_i identically zero (empty = unknown)

  std::size_t dim_state() const { return std::size_t(x0.size()); }
  std::size_t dim_noise() const;
  bool contains(const Vec& x) const;
  Mat sigma(const Vec& x) const;
  Vec field(const Vec& x, const Vec& u) const;  // b(x) + sigma(x) u, checked
  void validate() const;
};

// Steps of the control grid covering [0, t_star] (t_star * N rounded up).
std::size_t horizon_steps(const LimitOdeProblem& problem, const ControlGrid& control);

// Classical RK4 with one step per control cell; the control is constant on each step.
sde::ExplosivePath solve_control_ode(const LimitOdeProblem& problem, const ControlGrid& control);

// Reverse-mode derivative of a path objective through the RK4 map. node_gradient[n]
// is dF/dg_n for each alive node (may be zero vectors). Returns dF/du with the
// Euclidean (not L2) convention, i.e. one entry per u_n component.
ControlGrid control_gradient(const LimitOdeProblem& problem, const ControlGrid& control,
                             const sde::ExplosivePath& path, const std::vector<Vec>& node_gradient);

}  // namespace lillab::rate
