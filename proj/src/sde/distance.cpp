#include "lillab/sde/distance.hpp"

#include <algorithm>
#include <cmath>

#include "lillab/error.hpp"

namespace lillab::sde {

namespace {

void add_breakpoints(const ExplosivePath& p, double s, std::vector<double>& out) {
  const auto last = std::size_t(std::floor(s / p.dt()));
  for (std::size_t i = 0; i <= last && i < p.grid_size(); ++i) out.push_back(p.time(i));
}

}  // namespace

double path_distance(const ExplosivePath& g, const ExplosivePath& h, double s) {
  require(s >= 0.0, "path_distance: s must be nonnegative");
  require(g.dim() == h.dim(), "path_distance: dimension mismatch");
  if (s >= g.explosion_time() || s >= h.explosion_time()) return kInfinity;
  const double tol = 1e-12 * std::max(1.0, s);
  require(g.horizon() + tol >= s && h.horizon() + tol >= s, "path_distance: grids do not cover [0, s]");
  std::vector<double> times;
  add_breakpoints(g, s, times);
  add_breakpoints(h, s, times);
  times.push_back(s);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  double best = 0.0;
  for (double t : times) {
    if (t > s) break;
    const double tt = std::min(t, std::min(g.horizon(), h.horizon()));
    const auto a = g.at(tt);
    const auto b = h.at(tt);
    if (!a || !b) return kInfinity;
    best = std::max(best, (*a - *b).norm());
  }
  return best;
}

}  // namespace lillab::sde
