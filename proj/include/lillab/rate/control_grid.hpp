#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lillab/types.hpp"

namespace lillab::rate {

// Piecewise-constant control derivative u_n on [n/N, (n+1)/N), n < N,
// stored row-major (N x k). f is the running integral with f(0) = 0.
class ControlGrid {
 public:
  ControlGrid(std::size_t n_steps, std::size_t dim);
  ControlGrid(std::size_t n_steps, std::size_t dim, std::vector<double> values);

  // u_n = fdot((n + 1/2) / N).
  static ControlGrid from_derivative(const std::function<Vec(double)>& fdot, std::size_t n_steps,
                                     std::size_t dim);
  // u_n = N (f((n+1)/N) - f(n/N)).
  static ControlGrid from_path(const std::function<Vec(double)>& f, std::size_t n_steps, std::size_t dim);

  std::size_t n_steps() const { return n_; }
  std::size_t dim() const { return k_; }
  double h() const { return 1.0 / double(n_); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* step(std::size_t n) { return values_.data() + n * k_; }
  const double* step(std::size_t n) const { return values_.data() + n * k_; }
  Vec step_vec(std::size_t n) const;

  // 1/2 sum |u_n|^2 / N.
  double energy() const;
  // f at the nodes t_n = n/N, n = 0..N.
  std::vector<Vec> f_nodes() const;
  Vec f_at(double t) const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<double> values_;
};

// Radial projection onto {energy <= radius_energy}; identity inside.
ControlGrid project_energy_ball(ControlGrid u, double radius_energy = 1.0);

}  // namespace lillab::rate
