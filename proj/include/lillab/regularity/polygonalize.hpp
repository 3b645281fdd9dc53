#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "lillab/regularity/domain.hpp"
#include "lillab/regularity/hull.hpp"

namespace lillab::regularity {

struct PolygonApprox {
  std::size_t dim = 0;
  std::vector<Vec> vertices;  // sampled boundary points
  Hull hull;
  double volume = 0.0;         // hull
  double domain_volume = 0.0;  // quadrature of |V|
  double deficit = 0.0;
  Vec direction;
  std::vector<double> parallel_audit;  // |normal . v| per facet
  std::uint64_t seed_used = 0;

  nlohmann::json to_json() const;
  // role,facet,x1..xd: sample rows then one row per facet vertex, facets closed.
  void write_csv(std::ostream& out) const;
};

// Samples from the normalised boundary measure of a convex domain (d in {2, 3})
// using tables built once: arc length in 2D, a radially projected icosphere in 3D.
class BoundarySampler {
 public:
  explicit BoundarySampler(DomainSpec domain, std::size_t resolution = 0);

  const DomainSpec& domain() const { return domain_; }
  double domain_volume() const { return volume_; }
  double boundary_measure() const { return measure_; }
  std::vector<Vec> sample(std::size_t n, std::uint64_t seed) const;

 private:
  Vec boundary_at_angle(double theta) const;
  DomainSpec domain_;
  double volume_ = 0.0;
  double measure_ = 0.0;
  // 2D: angles and cumulative arc length. 3D: icosphere triangles.
  std::vector<double> theta_, cumulative_;
  std::vector<Eigen::Vector3d> sphere_;
  std::vector<std::array<std::size_t, 3>> tris_;
  std::vector<Eigen::Vector3d> mapped_;
  std::vector<double> tri_area_;
  double max_area_ = 0.0;
};

struct PolygonOptions {
  std::size_t max_retries = 8;
};

PolygonApprox polygonalize(const BoundarySampler& sampler, const Vec& v, std::size_t n, std::uint64_t seed,
                           const PolygonOptions& options = {});
PolygonApprox polygonalize(const DomainSpec& domain, const Vec& v, std::size_t n, std::uint64_t seed,
                           const PolygonOptions& options = {});
// Hull and audit of given points; domain_volume and deficit are left at zero.
PolygonApprox polygon_from_points(const std::vector<Vec>& points, const Vec& v);

// True iff every facet normal satisfies |normal . v| > tolerance.
bool face_parallel_check(const PolygonApprox& poly, const Vec& v, double tolerance = 1e-12);

}  // namespace lillab::regularity
