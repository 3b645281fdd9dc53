#pragma once

#include <cstddef>
#include <cstdint>

#include "lillab/types.hpp"

namespace lillab::sde {

// Brownian increments, one column per step (k rows, variance dt each).
// Auxiliary normals for exact schemes are addressed by (step, j) on a
// separate counter stream, so they never perturb the increments.
struct NoisePath {
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  double dt = 0.0;
  Mat increments;
  bool aux_negated = false;

  std::size_t steps() const { return std::size_t(increments.cols()); }
  std::size_t dim() const { return std::size_t(increments.rows()); }

  double auxiliary_normal(std::size_t step, std::size_t j, std::size_t dim_state) const;

  NoisePath coarsened(std::size_t factor) const;
  // B^eps_t = eps^{-1/2} B_{eps t}: dt -> dt/eps, increments * eps^{-1/2}.
  NoisePath time_changed(double eps) const;
  NoisePath negated() const;
};

NoisePath brownian_path(std::uint64_t seed, double dt, double horizon, std::size_t k,
                        std::uint64_t path_index = 0);

}  // namespace lillab::sde
