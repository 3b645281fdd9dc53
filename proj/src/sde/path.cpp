#include "lillab/sde/path.hpp"

#include <cmath>

#include "lillab/error.hpp"

namespace lillab::sde {

ExplosivePath::ExplosivePath(double dt, std::size_t grid_size, std::vector<Vec> states,
                             std::optional<std::size_t> explosion_index)
    : dt_(dt), grid_size_(grid_size), dim_(0), states_(std::move(states)), explosion_index_(explosion_index) {
  require(dt > 0.0 && std::isfinite(dt), "path: dt must be positive");
  require(grid_size >= 2, "path: need at least two grid points");
  require(!states_.empty(), "path: initial state required");
  dim_ = std::size_t(states_.front().size());
  if (explosion_index_) {
    require(*explosion_index_ >= 1 && *explosion_index_ < grid_size_, "path: explosion index out of range");
    require(states_.size() == *explosion_index_, "path: states must stop at the explosion index");
  } else {
    require(states_.size() == grid_size_, "path: one state per grid point required");
  }
  for (const auto& s : states_) require(std::size_t(s.size()) == dim_, "path: inconsistent state dimension");
}

double ExplosivePath::explosion_time() const {
  return explosion_index_ ? time(*explosion_index_) : kInfinity;
}

const Vec& ExplosivePath::state(std::size_t i) const {
  if (i >= states_.size()) throw InvalidInput("path: state queried at or after explosion");
  return states_[i];
}

std::optional<Vec> ExplosivePath::at(double t) const {
  if (t < 0.0 || t > horizon() * (1.0 + 1e-12) + 1e-300) return std::nullopt;
  if (t >= explosion_time()) return std::nullopt;
  const double s = t / dt_;
  auto i = std::size_t(std::floor(s));
  if (i >= grid_size_ - 1) i = grid_size_ - 2;
  const double w = std::min(1.0, std::max(0.0, s - double(i)));
  if (i + 1 >= states_.size()) {
    // Between the last finite grid point and the explosion time: hold.
    return states_[std::min(i, states_.size() - 1)];
  }
  if (w == 0.0) return states_[i];
  return (1.0 - w) * states_[i] + w * states_[i + 1];
}

}  // namespace lillab::sde
