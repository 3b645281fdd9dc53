#pragma once

#include <vector>

#include "lillab/rate/limit_ode.hpp"

namespace lillab::rate {

struct CramerResult {
  double value = 0.0;         // 1/2 int |fdot|^2, or +inf
  double max_residual = 0.0;  // sup over steps of the out-of-range part of (dg/dt - b)
  // Residual within a factor 10 of the tolerance on either side: the verdict
  // (finite vs infinite) is sensitive to the tolerance choice.
  bool borderline = false;
  std::vector<Vec> recovered_control;  // one fdot per step, zero after explosion
};

// Recovers fdot per step by least squares, fdot = sigma^+ (dg/dt - b), with
// b and sigma averaged over the step endpoints.
CramerResult cramer_transform(const LimitOdeProblem& problem, const sde::ExplosivePath& path, double tolerance);

}  // namespace lillab::rate
