#include "lillab/regularity/criteria.hpp"

#include <cmath>

#include "lillab/error.hpp"
#include "lillab/random/gaussian.hpp"
#include "lillab/regularity/simplex.hpp"

namespace lillab::regularity {

std::string verdict_name(Verdict v) { return v == Verdict::regular ? "regular" : "inconclusive"; }

nlohmann::json CriterionReport::to_json() const {
  return {{"criterion", criterion},
          {"verdict", verdict_name(verdict)},
          {"margin", margin},
          {"direction", sde::to_std(normal)}};
}

Mat range_projector(const Mat& m, double rank_tol) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  const double cut = rank_tol * (s.size() > 0 ? std::max(1.0, s[0]) : 1.0);
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > cut) ++r;
  const Mat u = svd.matrixU().leftCols(r);
  return u * u.transpose();
}

namespace {

void require_on_boundary(const DomainSpec& domain, const Vec& x, double tol) {
  require(std::size_t(x.size()) == domain.dim(), "boundary point has the wrong dimension");
  const double dist = boundary_distance_estimate(domain, x);
  if (!(dist <= tol)) throw InvalidInput("point is not on the boundary (distance estimate " + std::to_string(dist) + ")");
}

}  // namespace

CriterionReport sphere_criterion(const sde::SdeSystem& system, const DomainSpec& domain, const Vec& x,
                                 const CriterionOptions& options) {
  require(system.dim_state == domain.dim(), "sphere_criterion: system and domain dimensions differ");
  require_on_boundary(domain, x, options.boundary_tolerance);
  CriterionReport out;
  out.criterion = "sphere";
  out.normal = outward_normal(domain, x);
  const Mat p = range_projector(system.eval_diffusion(x));
  out.margin = (p * out.normal).norm();
  out.verdict = out.margin > options.tolerance ? Verdict::regular : Verdict::inconclusive;
  return out;
}

CriterionReport cone_criterion(const sde::SdeSystem& system, const DomainSpec& domain, const Vec& x,
                               const Mat& cone_basis, const CriterionOptions& options,
                               std::size_t probe_samples) {
  const Eigen::Index d = Eigen::Index(domain.dim());
  require(system.dim_state == domain.dim(), "cone_criterion: system and domain dimensions differ");
  require(cone_basis.rows() == d && cone_basis.cols() == d, "cone_criterion: basis must be d x d");
  require_on_boundary(domain, x, options.boundary_tolerance);
  double scale = 1.0;
  for (Eigen::Index j = 0; j < d; ++j) scale *= cone_basis.col(j).norm();
  const double det = cone_basis.determinant();
  if (!(std::abs(det) > 1e-12 * scale)) throw InvalidInput("cone_criterion: cone basis is linearly dependent");

  // Probe x + sum lambda_i b_i with lambda > 0 at several scales.
  random::GaussianStream probe(0x636f6e65ULL, 4);
  for (std::size_t s = 0; s < probe_samples; ++s) {
    Vec lam(d);
    for (Eigen::Index i = 0; i < d; ++i) lam[i] = probe.uniform(s, std::uint64_t(i));
    const double mag = std::pow(10.0, -4.0 + 4.0 * probe.uniform(s, std::uint64_t(d)));
    const Vec pt = x + mag * (cone_basis * lam);
    if (domain.implicit_fn(pt) <= 0.0) throw InvalidInput("cone_criterion: cone meets the closure of the domain");
  }

  const Mat sigma = system.eval_diffusion(x);
  const Eigen::Index k = sigma.cols();
  const Mat c = cone_basis.partialPivLu().solve(sigma);  // d x k
  // Variables p = a + 1 in [0, 2]^k, s = t + K >= 0; maximise s.
  const double big = std::max(0.0, (c * Vec::Ones(k)).maxCoeff()) + 1.0;
  Mat a = Mat::Zero(d + k + 1, k + 1);
  Vec b = Vec::Zero(d + k + 1);
  for (Eigen::Index i = 0; i < d; ++i) {
    a.row(i).head(k) = -c.row(i);
    a(i, k) = 1.0;
    b[i] = big - c.row(i).sum();
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    a(d + j, j) = 1.0;
    b[d + j] = 2.0;
  }
  a(d + k, k) = 1.0;
  b[d + k] = big + 1.0;
  const LpResult lp = solve_lp(a, b, [&] {
    Vec obj = Vec::Zero(k + 1);
    obj[k] = 1.0;
    return obj;
  }());
  CriterionReport out;
  out.criterion = "cone";
  out.margin = lp.value - big;
  out.normal = sigma * (lp.x.head(k).array() - 1.0).matrix();
  out.verdict = out.margin >= options.tolerance ? Verdict::regular : Verdict::inconclusive;
  return out;
}

}  // namespace lillab::regularity
