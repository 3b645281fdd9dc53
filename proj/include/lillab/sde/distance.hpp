#pragma once

#include "lillab/sde/path.hpp"

namespace lillab::sde {

// sup_{u in [0,s]} |g_u - h_u| over the union of both grids (linear
// interpolation), or +inf when s is not before both explosion times.
double path_distance(const ExplosivePath& g, const ExplosivePath& h, double s);

}  // namespace lillab::sde
