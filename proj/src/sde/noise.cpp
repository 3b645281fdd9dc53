#include "lillab/sde/noise.hpp"

#include <cmath>

#include "lillab/error.hpp"
#include "lillab/random/gaussian.hpp"

namespace lillab::sde {

NoisePath brownian_path(std::uint64_t seed, double dt, double horizon, std::size_t k, std::uint64_t path_index) {
  require(dt > 0.0 && std::isfinite(dt), "brownian_path: dt must be positive");
  require(horizon >= dt, "brownian_path: horizon must be at least dt");
  require(k >= 1, "brownian_path: k must be positive");
  const auto steps = std::size_t(std::ceil(horizon / dt - 1e-9));
  NoisePath noise;
  noise.seed = seed;
  noise.path_index = path_index;
  noise.dt = dt;
  noise.increments.resize(Eigen::Index(k), Eigen::Index(steps));
  random::GaussianStream stream(seed, random::kStreamIncrements);
  // Column-major storage: steps*k consecutive normals per path lane.
  stream.normals(path_index, 0, std::span<double>(noise.increments.data(), steps * k));
  noise.increments *= std::sqrt(dt);
  return noise;
}

double NoisePath::auxiliary_normal(std::size_t step, std::size_t j, std::size_t dim_state) const {
  random::GaussianStream stream(seed, random::kStreamAuxiliary);
  const double z = stream.normal(path_index, std::uint64_t(step) * dim_state + j);
  return aux_negated ? -z : z;
}

NoisePath NoisePath::coarsened(std::size_t factor) const {
  require(factor >= 1, "coarsened: factor must be positive");
  require(steps() % factor == 0, "coarsened: step count not divisible by factor");
  NoisePath out = *this;
  out.dt = dt * double(factor);
  const std::size_t n = steps() / factor;
  out.increments.setZero(increments.rows(), Eigen::Index(n));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t f = 0; f < factor; ++f) out.increments.col(Eigen::Index(c)) += increments.col(Eigen::Index(c * factor + f));
  return out;
}

NoisePath NoisePath::time_changed(double eps) const {
  require(eps > 0.0, "time_changed: eps must be positive");
  NoisePath out = *this;
  out.dt = dt / eps;
  out.increments *= 1.0 / std::sqrt(eps);
  return out;
}

NoisePath NoisePath::negated() const {
  NoisePath out = *this;
  out.increments = -increments;
  out.aux_negated = !aux_negated;
  return out;
}

}  // namespace lillab::sde
