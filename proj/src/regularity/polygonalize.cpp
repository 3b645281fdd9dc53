#include "lillab/regularity/polygonalize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "lillab/error.hpp"
#include "lillab/random/gaussian.hpp"
#include "lillab/sde/path_io.hpp"
#include "lillab/sde/system.hpp"

namespace lillab::regularity {

namespace {

constexpr std::uint64_t kSamplingStream = 4;

void build_icosphere(int levels, std::vector<Eigen::Vector3d>& v, std::vector<std::array<std::size_t, 3>>& f) {
  const double t = std::numbers::phi;
  v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
       {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  f = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
       {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
       {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> mid;
    auto midpoint = [&](std::size_t a, std::size_t b) {
      const auto key = std::minmax(a, b);
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      return mid[key] = v.size() - 1;
    };
    std::vector<std::array<std::size_t, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const std::size_t ab = midpoint(tri[0], tri[1]), bc = midpoint(tri[1], tri[2]), ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
}

}  // namespace

BoundarySampler::BoundarySampler(DomainSpec domain, std::size_t resolution) : domain_(std::move(domain)) {
  require(domain_.convex, "polygonalize: domain must be flagged convex");
  const std::size_t d = domain_.dim();
  require(d == 2 || d == 3, "polygonalize: only d = 2 and d = 3 are supported");
  if (d == 2) {
    const std::size_t m = resolution ? resolution : 4096;
    theta_.resize(m + 1);
    cumulative_.assign(m + 1, 0.0);
    std::vector<Vec> pts(m + 1);
    double area = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      theta_[i] = 2.0 * std::numbers::pi * double(i) / double(m);
      pts[i] = i == m ? pts[0] : boundary_at_angle(theta_[i]);
      if (i > 0) cumulative_[i] = cumulative_[i - 1] + (pts[i] - pts[i - 1]).norm();
      if (i < m) area += (pts[i] - domain_.interior_point).squaredNorm();
    }
    // Periodic trapezoid for 1/2 int r^2 dtheta.
    volume_ = 0.5 * area * 2.0 * std::numbers::pi / double(m);
    measure_ = cumulative_.back();
  } else {
    build_icosphere(resolution ? int(resolution) : 5, sphere_, tris_);
    mapped_.resize(sphere_.size());
    for (std::size_t i = 0; i < sphere_.size(); ++i)
      mapped_[i] = radial_boundary_point(domain_, Vec(sphere_[i]));
    tri_area_.resize(tris_.size());
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const auto& t = tris_[i];
      tri_area_[i] = 0.5 * (mapped_[t[1]] - mapped_[t[0]]).cross(mapped_[t[2]] - mapped_[t[0]]).norm();
      measure_ += tri_area_[i];
      max_area_ = std::max(max_area_, tri_area_[i]);
    }
    // |V| = int_{S^2} r^3 / 3: Gauss-Legendre in cos(theta), periodic trapezoid in phi.
    using boost::math::quadrature::gauss;
    constexpr unsigned kNodes = 64;
    const std::size_t n_phi = 128;
    const Vec& c = domain_.interior_point;
    volume_ = gauss<double, kNodes>::integrate(
        [&](double u) {
          const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
          double acc = 0.0;
          for (std::size_t j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * std::numbers::pi * double(j) / double(n_phi);
            Vec dir(3);
            dir << s * std::cos(phi), s * std::sin(phi), u;
            acc += std::pow((radial_boundary_point(domain_, dir) - c).norm(), 3) / 3.0;
          }
          return acc * 2.0 * std::numbers::pi / double(n_phi);
        },
        -1.0, 1.0);
  }
}

Vec BoundarySampler::boundary_at_angle(double theta) const {
  Vec dir(2);
  dir << std::cos(theta), std::sin(theta);
  return radial_boundary_point(domain_, dir);
}

std::vector<Vec> BoundarySampler::sample(std::size_t n, std::uint64_t seed) const {
  random::GaussianStream rng(seed, kSamplingStream);
  std::vector<Vec> out;
  out.reserve(n);
  if (domain_.dim() == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = rng.uniform(i, 0) * measure_;
      const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
      const std::size_t hi = std::clamp<std::size_t>(std::size_t(it - cumulative_.begin()), 1, cumulative_.size() - 1);
      const double w = (s - cumulative_[hi - 1]) / (cumulative_[hi] - cumulative_[hi - 1]);
      out.push_back(boundary_at_angle(theta_[hi - 1] + w * (theta_[hi] - theta_[hi - 1])));
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    // Uniform triangle, accepted with probability area / max area.
    for (std::uint64_t attempt = 0;; ++attempt) {
      const std::uint64_t base = attempt * 4;
      const std::size_t t = std::min(tris_.size() - 1, std::size_t(rng.uniform(i, base) * double(tris_.size())));
      if (rng.uniform(i, base + 1) * max_area_ > tri_area_[t]) continue;
      double a = rng.uniform(i, base + 2), b = rng.uniform(i, base + 3);
      if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
      const auto& tri = tris_[t];
      const Eigen::Vector3d p = mapped_[tri[0]] + a * (mapped_[tri[1]] - mapped_[tri[0]]) + b * (mapped_[tri[2]] - mapped_[tri[0]]);
      out.push_back(radial_boundary_point(domain_, Vec(p) - domain_.interior_point));
      break;
    }
  }
  return out;
}

namespace {

void fill_audit(PolygonApprox& poly, const Vec& v) {
  poly.direction = v;
  poly.parallel_audit.clear();
  for (const auto& f : poly.hull.facets) poly.parallel_audit.push_back(std::abs(f.normal.dot(v)));
}

Vec unit_direction(const Vec& v, std::size_t d) {
  require(std::size_t(v.size()) == d, "polygonalize: direction has the wrong dimension");
  const double n = v.norm();
  require(n > 0.0 && std::isfinite(n), "polygonalize: direction must be nonzero");
  return v / n;
}

}  // namespace

PolygonApprox polygonalize(const BoundarySampler& sampler, const Vec& v, std::size_t n, std::uint64_t seed,
                           const PolygonOptions& options) {
  const std::size_t d = sampler.domain().dim();
  require(n >= d + 1, "polygonalize: need at least d + 1 samples");
  const Vec u = unit_direction(v, d);
  for (std::size_t r = 0; r <= options.max_retries; ++r) {
    PolygonApprox poly;
    poly.dim = d;
    poly.seed_used = seed + r;
    poly.vertices = sampler.sample(n, poly.seed_used);
    try {
      poly.hull = convex_hull(poly.vertices);
    } catch (const NumericalFailure&) {
      continue;
    }
    poly.volume = poly.hull.volume;
    poly.domain_volume = sampler.domain_volume();
    poly.deficit = poly.domain_volume - poly.volume;
    fill_audit(poly, u);
    return poly;
  }
  throw NumericalFailure("polygonalize: degenerate hull after " + std::to_string(options.max_retries) + " retries", {});
}

PolygonApprox polygonalize(const DomainSpec& domain, const Vec& v, std::size_t n, std::uint64_t seed,
                           const PolygonOptions& options) {
  return polygonalize(BoundarySampler(domain), v, n, seed, options);
}

PolygonApprox polygon_from_points(const std::vector<Vec>& points, const Vec& v) {
  require(!points.empty(), "polygon_from_points: no points");
  PolygonApprox poly;
  poly.dim = std::size_t(points.front().size());
  poly.vertices = points;
  poly.hull = convex_hull(points);
  poly.volume = poly.hull.volume;
  fill_audit(poly, unit_direction(v, poly.dim));
  return poly;
}

bool face_parallel_check(const PolygonApprox& poly, const Vec& v, double tolerance) {
  const Vec u = v.normalized();
  return std::all_of(poly.hull.facets.begin(), poly.hull.facets.end(),
                     [&](const Facet& f) { return std::abs(f.normal.dot(u)) > tolerance; });
}

nlohmann::json PolygonApprox::to_json() const {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& p : vertices) verts.push_back(sde::to_std(p));
  nlohmann::json facets = nlohmann::json::array();
  for (std::size_t i = 0; i < hull.facets.size(); ++i) {
    const auto& f = hull.facets[i];
    facets.push_back({{"vertices", f.vertices},
                      {"normal", sde::to_std(f.normal)},
                      {"offset", f.offset},
                      {"audit", parallel_audit.at(i)}});
  }
  const double min_audit =
      parallel_audit.empty() ? 0.0 : *std::min_element(parallel_audit.begin(), parallel_audit.end());
  return {{"dim", dim},
          {"seed_used", seed_used},
          {"direction", sde::to_std(direction)},
          {"vertices", verts},
          {"hull_vertices", hull.vertices},
          {"facets", facets},
          {"volume", volume},
          {"domain_volume", domain_volume},
          {"deficit", deficit},
          {"min_audit", min_audit}};
}

void PolygonApprox::write_csv(std::ostream& out) const {
  out << "role,facet";
  for (std::size_t i = 0; i < dim; ++i) out << ",x" << i + 1;
  out << '\n';
  auto row = [&](const char* role, long facet, const Vec& p) {
    out << role << ',' << facet;
    for (Eigen::Index i = 0; i < p.size(); ++i) out << ',' << sde::format_double(p[i]);
    out << '\n';
  };
  for (const auto& p : vertices) row("sample", -1, p);
  for (std::size_t i = 0; i < hull.facets.size(); ++i) {
    const auto& f = hull.facets[i];
    for (std::size_t v : f.vertices) row("facet", long(i), vertices[v]);
    row("facet", long(i), vertices[f.vertices.front()]);
  }
}

}  // namespace lillab::regularity
