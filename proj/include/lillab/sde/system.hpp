#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lillab/types.hpp"

namespace lillab::sde {

using DriftFn = std::function<Vec(const Vec&)>;
using DiffusionFn = std::function<Mat(const Vec&)>;
using DomainFn = std::function<bool(const Vec&)>;

// dx = A x dt + G dB.
struct LinearStructure {
  Mat drift_matrix;
  Mat diffusion;
};

struct SdeSystem {
  std::size_t dim_state = 0;
  std::size_t dim_noise = 0;
  DriftFn drift;
  DiffusionFn diffusion;
  DomainFn domain_contains;  // empty means every finite state
  std::string label;
  std::optional<LinearStructure> linear;

  bool contains(const Vec& x) const;
  // Checked evaluations: wrong shapes raise InvalidInput, non-finite values NumericalFailure.
  Vec eval_drift(const Vec& x) const;
  Mat eval_diffusion(const Vec& x) const;
};

SdeSystem make_linear_system(const Mat& a, const Mat& g, std::string label);

struct SystemCheck {
  bool ok = true;
  std::size_t samples_in_domain = 0;
  std::optional<Vec> offending_state;
  std::string message;
};

// Samples the box uniformly (deterministic grid + seed) and evaluates both callbacks.
SystemCheck check_system(const SdeSystem& system, const Vec& lo, const Vec& hi, std::size_t n_samples,
                         std::uint64_t seed);

std::vector<double> to_std(const Vec& v);

}  // namespace lillab::sde
