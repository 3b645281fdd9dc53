#include "lillab/regularity/domain.hpp"

#include <cmath>
#include <numbers>

#include "lillab/error.hpp"

namespace lillab::regularity {

DomainSpec ball_domain(const Vec& center, double radius) {
  require(radius > 0.0, "ball_domain: radius must be positive");
  DomainSpec d;
  d.implicit_fn = [center, radius](const Vec& x) { return (x - center).norm() - radius; };
  d.gradient_fn = [center](const Vec& x) -> Vec {
    const Vec v = x - center;
    const double n = v.norm();
    return n > 0.0 ? Vec(v / n) : Vec(Vec::Zero(v.size()));
  };
  d.bounding_box = {center.array() - 1.5 * radius, center.array() + 1.5 * radius};
  d.convex = true;
  d.interior_point = center;
  d.label = "ball";
  return d;
}

DomainSpec ellipsoid_domain(const Vec& center, const Vec& semi_axes) {
  require(center.size() == semi_axes.size() && (semi_axes.array() > 0.0).all(),
          "ellipsoid_domain: semi-axes must be positive");
  DomainSpec d;
  const Vec inv2 = semi_axes.array().square().inverse();
  d.implicit_fn = [center, inv2](const Vec& x) {
    return ((x - center).array().square() * inv2.array()).sum() - 1.0;
  };
  d.gradient_fn = [center, inv2](const Vec& x) -> Vec { return 2.0 * ((x - center).array() * inv2.array()).matrix(); };
  const double r = semi_axes.maxCoeff();
  d.bounding_box = {center.array() - 1.5 * r, center.array() + 1.5 * r};
  d.convex = true;
  d.interior_point = center;
  d.label = "ellipsoid";
  return d;
}

DomainSpec rotated_domain(const DomainSpec& domain, const Mat& q) {
  DomainSpec d = domain;
  const Mat qt = q.transpose();
  auto f = domain.implicit_fn;
  auto g = domain.gradient_fn;
  d.implicit_fn = [f, qt](const Vec& x) { return f(qt * x); };
  d.gradient_fn = [g, q, qt](const Vec& x) -> Vec { return q * g(qt * x); };
  d.interior_point = q * domain.interior_point;
  // Enclosing box of the rotated box.
  const Vec c = 0.5 * (domain.bounding_box.lo + domain.bounding_box.hi);
  const double half = 0.5 * (domain.bounding_box.hi - domain.bounding_box.lo).norm();
  d.bounding_box = {(q * c).array() - half, (q * c).array() + half};
  d.label = domain.label + " (rotated)";
  return d;
}

Vec outward_normal(const DomainSpec& domain, const Vec& x) {
  const Vec g = domain.gradient_fn(x);
  const double n = g.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("outward_normal: vanishing gradient");
  return g / n;
}

double boundary_distance_estimate(const DomainSpec& domain, const Vec& x) {
  const double g = domain.gradient_fn(x).norm();
  if (!(g > 0.0)) return kInfinity;
  return std::abs(domain.implicit_fn(x)) / g;
}

Vec radial_boundary_point(const DomainSpec& domain, const Vec& direction) {
  const Vec u = direction.normalized();
  const Vec& c = domain.interior_point;
  double lo = 0.0;
  double hi = (domain.bounding_box.hi - domain.bounding_box.lo).norm();
  require(domain.implicit_fn(c + hi * u) > 0.0, "radial_boundary_point: ray does not leave the bounding box");
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (domain.implicit_fn(c + mid * u) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return c + lo * u;
}

DomainCheck verify_domain(const DomainSpec& domain, std::size_t n_boundary) {
  DomainCheck out;
  const std::size_t d = domain.dim();
  if (d == 0 || std::size_t(domain.bounding_box.lo.size()) != d || std::size_t(domain.bounding_box.hi.size()) != d)
    return {false, "dimension mismatch"};
  if (!(domain.implicit_fn(domain.interior_point) < 0.0)) return {false, "interior witness is not inside"};
  for (std::size_t mask = 0; mask < (std::size_t(1) << d); ++mask) {
    Vec corner = Vec::Zero(Eigen::Index(d));
    for (std::size_t i = 0; i < d; ++i)
      corner[Eigen::Index(i)] = (mask >> i) & 1 ? domain.bounding_box.hi[Eigen::Index(i)] : domain.bounding_box.lo[Eigen::Index(i)];
    if (!(domain.implicit_fn(corner) > 0.0)) return {false, "box corner is not outside"};
  }
  for (std::size_t s = 0; s < n_boundary; ++s) {
    Vec dir = Vec::Zero(Eigen::Index(d));
    // Spread directions with a golden-angle sequence (d = 2, 3) or axis cycling.
    const double a = 2.0 * std::numbers::pi * double(s) / double(n_boundary);
    dir[0] = std::cos(a);
    if (d >= 2) dir[1] = std::sin(a);
    if (d >= 3) dir[2] = std::cos(std::numbers::phi * double(s));
    const Vec x = radial_boundary_point(domain, dir);
    const double g = domain.gradient_fn(x).norm();
    if (!(g > 0.0) || !std::isfinite(g)) return {false, "vanishing gradient on the boundary"};
  }
  return out;
}

}  // namespace lillab::regularity
