#pragma once

#include <cstdint>
#include <vector>

#include "lillab/rate/limit_ode.hpp"

namespace lillab::rate {

struct LimitSetOptions {
  std::size_t n_steps = 256;
  std::size_t modes = 8;
  double scale_lo = 0.0;  // samples have energy s^2 with s uniform in [scale_lo, scale_hi]
  double scale_hi = 1.0;
};

struct LimitSetSample {
  ControlGrid control;
  sde::ExplosivePath path;
};

std::vector<LimitSetSample> limit_set_sample_with_controls(const LimitOdeProblem& problem, std::size_t n_samples,
                                                           std::uint64_t seed, const LimitSetOptions& options = {});
std::vector<sde::ExplosivePath> limit_set_sample(const LimitOdeProblem& problem, std::size_t n_samples,
                                                 std::uint64_t seed, const LimitSetOptions& options = {});

// min over samples of path_distance(path, sample, s). An upper bound on the
// distance from path to the limit set.
double limit_set_distance(const sde::ExplosivePath& path, const std::vector<sde::ExplosivePath>& samples,
                          double s);

// Largest t in {1, 1/2, 1/4, ...} (down to 2^-max_halvings) such that all
// sampled limit paths stay inside the box [lo, hi] on [0, t]; 0 if none.
double probe_t_star(const LimitOdeProblem& problem, const Vec& lo, const Vec& hi, std::size_t n_samples,
                    std::uint64_t seed, std::size_t max_halvings = 10);

}  // namespace lillab::rate
