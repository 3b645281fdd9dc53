#pragma once

#include "lillab/sde/system.hpp"

namespace lillab::sde {

// One-step law of dx = A x dt + G dB over a step h:
//   x_h = mean_map x_0 + xi,  xi ~ N(0, covariance),
// and the split xi = noise_gain * dB + residual, where dB is the Brownian
// increment over the step and the residual is independent of dB with
// covariance residual_covariance.
struct LinearTransition {
  double h = 0.0;
  Mat mean_map;
  Mat covariance;
  Mat covariance_factor;  // F F^T = covariance
  Mat noise_gain;         // Cov(xi, dB) / h
  Mat residual_covariance;
  Mat residual_factor;
};

bool is_nilpotent(const Mat& a);
LinearTransition linear_transition(const LinearStructure& lin, double h);

// F with F F^T = Q for symmetric positive semidefinite Q. Uses a pivoted
// LDLT on the diagonally scaled matrix so that tiny and large variances
// (h^3 against h) keep their relative accuracy.
Mat psd_factor(const Mat& q);

}  // namespace lillab::sde
