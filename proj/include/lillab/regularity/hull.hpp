#pragma once

#include <vector>

#include "lillab/types.hpp"

namespace lillab::regularity {

// normal . x <= offset on the hull; vertices are indices into the input points,
// counter-clockwise seen from outside.
struct Facet {
  std::vector<std::size_t> vertices;
  Vec normal;
  double offset = 0.0;
};

struct Hull {
  std::size_t dim = 0;
  std::vector<Facet> facets;
  std::vector<std::size_t> vertices;  // sorted, unique
  double volume = 0.0;                // area for d = 2
};

// d in {2, 3}. Throws NumericalFailure when the points are affinely dependent.
Hull convex_hull(const std::vector<Vec>& points);
Hull convex_hull_2d(const std::vector<Vec>& points);
Hull convex_hull_3d(const std::vector<Vec>& points);

// Largest facet violation normal . p - offset over the given points.
double max_violation(const Hull& hull, const std::vector<Vec>& points);

}  // namespace lillab::regularity
