#include <cmath>
#include <numbers>

#include "lillab/error.hpp"
#include "lillab/scaling/index.hpp"

namespace lillab::scaling {

double AsymptoticIndex::eps_ceiling() { return std::exp(-std::numbers::e) * 0.99; }

AsymptoticIndex::AsymptoticIndex(std::vector<IndexExponent> exponents, double eps_star)
    : exponents_(std::move(exponents)), eps_star_(eps_star) {
  require(!exponents_.empty(), "asymptotic index: at least one component required");
  require(eps_star > 0.0 && eps_star <= eps_ceiling(), "asymptotic index: eps_star must lie in (0, 0.99 e^{-e}]");
  for (const auto& e : exponents_) {
    require(e.ell >= 1 && e.k >= 0, "asymptotic index: need ell >= 1 and k >= 0");
    // psi increasing on (0, eps_star] iff ell * r(eps) > k / log(1/eps) there.
    const double le = std::log(1.0 / eps_star);
    require(e.ell * std::log(le) * le > e.k, "asymptotic index: not monotone up to eps_star");
  }
}

double loglog(double eps) { return std::log(std::log(1.0 / eps)); }

double psi_component(int ell, int k, double eps) {
  return std::sqrt(std::pow(eps, ell) * std::pow(loglog(eps), k));
}

Vec AsymptoticIndex::operator()(double eps) const {
  if (!(eps > 0.0 && eps <= eps_star_))
    throw InvalidInput("eval_index: eps outside (0, eps_star]");
  Vec out(Eigen::Index(exponents_.size()));
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    out[Eigen::Index(i)] = psi_component(exponents_[i].ell, exponents_[i].k, eps);
  return out;
}

Vec eval_index(const AsymptoticIndex& psi, double eps) { return psi(eps); }

}  // namespace lillab::scaling
