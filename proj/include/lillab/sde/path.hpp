#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lillab/types.hpp"

namespace lillab::sde {

// Uniform-grid trajectory t_i = i*dt, i < grid_size, with an optional
// explosion index. States exist only before the explosion index; every
// query at or after the explosion time returns the death marker (nullopt).
class ExplosivePath {
 public:
  ExplosivePath(double dt, std::size_t grid_size, std::vector<Vec> states,
                std::optional<std::size_t> explosion_index);

  double dt() const { return dt_; }
  std::size_t grid_size() const { return grid_size_; }
  std::size_t dim() const { return dim_; }
  double time(std::size_t i) const { return dt_ * double(i); }
  double horizon() const { return time(grid_size_ - 1); }

  std::optional<std::size_t> explosion_index() const { return explosion_index_; }
  bool exploded() const { return explosion_index_.has_value(); }
  // +inf when the path does not explode on its grid.
  double explosion_time() const;

  std::size_t n_alive() const { return states_.size(); }
  const Vec& state(std::size_t i) const;
  const std::vector<Vec>& states() const { return states_; }
  bool alive_at_index(std::size_t i) const { return i < states_.size(); }

  // Linear interpolation; nullopt at or after the explosion time or beyond the horizon.
  std::optional<Vec> at(double t) const;

 private:
  double dt_;
  std::size_t grid_size_;
  std::size_t dim_;
  std::vector<Vec> states_;
  std::optional<std::size_t> explosion_index_;
};

}  // namespace lillab::sde
