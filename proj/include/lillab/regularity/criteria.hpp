#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lillab/regularity/domain.hpp"
#include "lillab/sde/system.hpp"

namespace lillab::regularity {

// Sufficient conditions only: the negative outcome is "inconclusive", never "irregular".
enum class Verdict { regular, inconclusive };
std::string verdict_name(Verdict v);

struct CriterionReport {
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;  // |P n| for the sphere test, LP optimum for the cone test
  Vec normal;           // outward unit normal (sphere) or best range vector (cone)
  std::string criterion;

  nlohmann::json to_json() const;
};

struct CriterionOptions {
  double tolerance = 1e-9;
  double boundary_tolerance = 1e-8;  // allowed |phi| / |grad phi| at x
};

// Regular iff the outward normal has a component of norm > tolerance in range(sigma(x)).
CriterionReport sphere_criterion(const sde::SdeSystem& system, const DomainSpec& domain, const Vec& x,
                                 const CriterionOptions& options = {});

// Columns of cone_basis span the cone at x. Regular iff some w in range(sigma(x))
// has cone coordinates B^{-1} w all >= tolerance after normalising |a|_inf <= 1.
CriterionReport cone_criterion(const sde::SdeSystem& system, const DomainSpec& domain, const Vec& x,
                               const Mat& cone_basis, const CriterionOptions& options = {},
                               std::size_t probe_samples = 256);

// Orthogonal projector onto the column space of m.
Mat range_projector(const Mat& m, double rank_tol = 1e-12);

}  // namespace lillab::regularity
