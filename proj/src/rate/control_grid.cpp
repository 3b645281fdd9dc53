#include "lillab/rate/control_grid.hpp"

#include <cmath>

#include "lillab/error.hpp"
#include "lillab/simd/kernels.hpp"

namespace lillab::rate {

ControlGrid::ControlGrid(std::size_t n_steps, std::size_t dim) : ControlGrid(n_steps, dim, std::vector<double>(n_steps * dim, 0.0)) {}

ControlGrid::ControlGrid(std::size_t n_steps, std::size_t dim, std::vector<double> values)
    : n_(n_steps), k_(dim), values_(std::move(values)) {
  require(n_ >= 1 && k_ >= 1, "control grid: N and k must be positive");
  require(values_.size() == n_ * k_, "control grid: value count must be N * k");
  for (double v : values_) require(std::isfinite(v), "control grid: non-finite control value");
}

ControlGrid ControlGrid::from_derivative(const std::function<Vec(double)>& fdot, std::size_t n_steps,
                                         std::size_t dim) {
  ControlGrid u(n_steps, dim);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const Vec v = fdot((double(n) + 0.5) / double(n_steps));
    require(std::size_t(v.size()) == dim, "control grid: derivative has wrong dimension");
    for (std::size_t i = 0; i < dim; ++i) u.step(n)[i] = v[Eigen::Index(i)];
  }
  return u;
}

ControlGrid ControlGrid::from_path(const std::function<Vec(double)>& f, std::size_t n_steps, std::size_t dim) {
  ControlGrid u(n_steps, dim);
  Vec prev = f(0.0);
  require(std::size_t(prev.size()) == dim, "control grid: path has wrong dimension");
  for (std::size_t n = 0; n < n_steps; ++n) {
    const Vec next = f(double(n + 1) / double(n_steps));
    for (std::size_t i = 0; i < dim; ++i) u.step(n)[i] = (next[Eigen::Index(i)] - prev[Eigen::Index(i)]) * double(n_steps);
    prev = next;
  }
  return u;
}

Vec ControlGrid::step_vec(std::size_t n) const {
  return Eigen::Map<const Vec>(step(n), Eigen::Index(k_));
}

double ControlGrid::energy() const { return 0.5 * simd::sum_squares(values_) / double(n_); }

std::vector<Vec> ControlGrid::f_nodes() const {
  std::vector<Vec> out;
  out.reserve(n_ + 1);
  Vec f = Vec::Zero(Eigen::Index(k_));
  out.push_back(f);
  for (std::size_t n = 0; n < n_; ++n) {
    f += step_vec(n) * h();
    out.push_back(f);
  }
  return out;
}

Vec ControlGrid::f_at(double t) const {
  require(t >= 0.0 && t <= 1.0 + 1e-12, "control grid: t outside [0, 1]");
  Vec f = Vec::Zero(Eigen::Index(k_));
  const double s = std::min(t, 1.0) * double(n_);
  const auto full = std::size_t(std::floor(s));
  for (std::size_t n = 0; n < full && n < n_; ++n) f += step_vec(n) * h();
  if (full < n_) f += step_vec(full) * ((s - double(full)) * h());
  return f;
}

ControlGrid project_energy_ball(ControlGrid u, double radius_energy) {
  require(radius_energy > 0.0, "project_energy_ball: radius must be positive");
  const double e = u.energy();
  if (e > radius_energy) simd::scale(std::sqrt(radius_energy / e), u.values());
  // Guard the last ulp so the feasibility invariant holds exactly.
  while (u.energy() > radius_energy) simd::scale(1.0 - 1e-15, u.values());
  return u;
}

}  // namespace lillab::rate
