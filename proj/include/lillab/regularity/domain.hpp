#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "lillab/types.hpp"

namespace lillab::regularity {

struct Box {
  Vec lo, hi;
};

// V = {implicit_fn < 0}; gradient_fn points outward on the boundary.
struct DomainSpec {
  std::function<double(const Vec&)> implicit_fn;
  std::function<Vec(const Vec&)> gradient_fn;
  Box bounding_box;
  bool convex = false;
  Vec interior_point;
  std::string label;

  std::size_t dim() const { return std::size_t(interior_point.size()); }
};

DomainSpec ball_domain(const Vec& center, double radius);
DomainSpec ellipsoid_domain(const Vec& center, const Vec& semi_axes);
// {x : implicit(Q^T x) < 0}.
DomainSpec rotated_domain(const DomainSpec& domain, const Mat& q);

struct DomainCheck {
  bool ok = true;
  std::string message;
};

// Sign convention at the box corners vs the interior witness, and nonzero
// gradients at n_boundary boundary points found by radial bisection.
DomainCheck verify_domain(const DomainSpec& domain, std::size_t n_boundary = 64);

Vec outward_normal(const DomainSpec& domain, const Vec& x);
// |implicit(x)| / |grad(x)|: first-order distance to the boundary.
double boundary_distance_estimate(const DomainSpec& domain, const Vec& x);
// Boundary point on the ray interior_point + r * direction, bisected to ~1e-16
// relative and taken from the inside (implicit < 0).
Vec radial_boundary_point(const DomainSpec& domain, const Vec& direction);

}  // namespace lillab::regularity
