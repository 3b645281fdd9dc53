#pragma once

#include <vector>

#include "lillab/types.hpp"

namespace lillab::scaling {

struct IndexExponent {
  int ell = 1;
  int k = 0;
};

// psi_i(eps) = sqrt(eps^ell_i * (log log 1/eps)^k_i) on (0, eps_star].
class AsymptoticIndex {
 public:
  static constexpr double kDefaultEpsStar = 1e-2;
  static double eps_ceiling();  // e^{-e} * 0.99

  explicit AsymptoticIndex(std::vector<IndexExponent> exponents, double eps_star = kDefaultEpsStar);

  std::size_t dim() const { return exponents_.size(); }
  double eps_star() const { return eps_star_; }
  const std::vector<IndexExponent>& exponents() const { return exponents_; }

  Vec operator()(double eps) const;

 private:
  std::vector<IndexExponent> exponents_;
  double eps_star_;
};

Vec eval_index(const AsymptoticIndex& psi, double eps);

// r(eps) = log log 1/eps.
double loglog(double eps);
// Unchecked closed form for one component; valid wherever log log 1/eps > 0.
double psi_component(int ell, int k, double eps);

}  // namespace lillab::scaling
