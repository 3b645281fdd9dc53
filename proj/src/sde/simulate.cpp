#include "lillab/sde/simulate.hpp"

#include <cmath>

#include "lillab/error.hpp"
#include "lillab/sde/linear_transition.hpp"

namespace lillab::sde {

Scheme parse_scheme(std::string_view name) {
  if (name == "euler") return Scheme::euler;
  if (name == "exact_linear") return Scheme::exact_linear;
  throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme scheme) { return scheme == Scheme::euler ? "euler" : "exact_linear"; }

ExplosivePath simulate_sde(const SdeSystem& system, const Vec& x0, const NoisePath& noise, double horizon,
                           Scheme scheme) {
  require(std::size_t(x0.size()) == system.dim_state, "simulate_sde: x0 has wrong dimension");
  require(noise.dim() == system.dim_noise, "simulate_sde: noise dimension does not match the system");
  require(horizon > 0.0, "simulate_sde: horizon must be positive");
  require(system.contains(x0), "simulate_sde: x0 outside the domain");
  const auto steps = std::size_t(std::ceil(horizon / noise.dt - 1e-9));
  require(steps <= noise.steps(), "simulate_sde: noise path shorter than the horizon");

  std::vector<Vec> states;
  states.reserve(steps + 1);
  states.push_back(x0);
  std::optional<std::size_t> explosion;

  if (scheme == Scheme::euler) {
    Vec x = x0;
    for (std::size_t n = 0; n < steps; ++n) {
      const Vec b = system.eval_drift(x);
      const Mat s = system.eval_diffusion(x);
      x = x + b * noise.dt + s * noise.increments.col(Eigen::Index(n));
      if (!system.contains(x)) {
        explosion = n + 1;
        break;
      }
      states.push_back(x);
    }
  } else {
    if (!system.linear) throw InvalidInput("simulate_sde: exact_linear requires a linear system");
    const LinearTransition tr = linear_transition(*system.linear, noise.dt);
    const std::size_t d = system.dim_state;
    Vec x = x0;
    Vec z = Vec::Zero(Eigen::Index(d));
    for (std::size_t n = 0; n < steps; ++n) {
      for (std::size_t j = 0; j < d; ++j) z[Eigen::Index(j)] = noise.auxiliary_normal(n, j, d);
      x = tr.mean_map * x + tr.noise_gain * noise.increments.col(Eigen::Index(n)) + tr.residual_factor * z;
      if (!x.allFinite()) throw NumericalFailure("simulate_sde: non-finite exact transition", to_std(x));
      if (!system.contains(x)) {
        explosion = n + 1;
        break;
      }
      states.push_back(x);
    }
  }
  return ExplosivePath(noise.dt, steps + 1, std::move(states), explosion);
}

}  // namespace lillab::sde
