#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lillab/scaling/contraction.hpp"
#include "lillab/scaling/index.hpp"

namespace lillab::scaling {

// Any family of bijections indexed by a positive multiindex alpha.
struct GenericContraction {
  Vec center;
  std::function<Vec(const Vec& alpha, const Vec& y)> map;
  std::function<Vec(const Vec& alpha, const Vec& y)> inverse;
};

GenericContraction as_generic(const ContractionFamily& phi);

struct PropertyResult {
  std::string name;
  bool pass = true;
  double worst_violation = 0.0;
  std::optional<nlohmann::json> worst_sample;
};

struct ModulusRow {
  double index_gap = 0.0;  // |alpha beta^{-1} - 1|
  double max_displacement = 0.0;
};

struct PropertyReport {
  std::vector<PropertyResult> properties;
  std::vector<ModulusRow> modulus;
  bool all_pass() const;
  const PropertyResult& property(const std::string& name) const;
  nlohmann::json to_json() const;
};

// (i) fixed center, (ii) nonexpansive in the index order on each (y, z) pair
// for each (alpha, beta) with alpha >= beta, (iii) Phi_a o Phi_b^{-1} -> id:
// each alpha pair is moved towards beta so that max_i |alpha_i / beta_i - 1|
// runs through min(1, initial gap) * {1, 1e-1, 1e-2, 1e-3};
// (iii) passes when the displacement at the smallest gap is below tolerance
// or at most 1e-2 of the displacement at the largest gap.
PropertyReport check_contraction_family(const GenericContraction& phi,
                                        const std::vector<std::pair<Vec, Vec>>& sample_pairs,
                                        const std::vector<std::pair<Vec, Vec>>& alpha_pairs, double tolerance);
PropertyReport check_contraction_family(const ContractionFamily& phi,
                                        const std::vector<std::pair<Vec, Vec>>& sample_pairs,
                                        const std::vector<std::pair<Vec, Vec>>& alpha_pairs, double tolerance);

struct IndexRatioRow {
  long j = 0;
  double max_deviation = 0.0;
  double closed_form_bound = 0.0;
};

struct IndexReport {
  PropertyReport properties;
  std::vector<IndexRatioRow> rows;
  // Smallest probed j from which every deviation is below tolerance_eps (absent if none).
  std::optional<long> threshold_j;
  nlohmann::json to_json() const;
};

// Deviation bound from the closed form for a single (ell, k) component:
// c^{-ell/2} (log(j log 1/c) / log((j+1) log 1/c))^{k/2} - 1.
double index_ratio_bound(int ell, int k, double c, long j);

IndexReport check_asymptotic_index(const AsymptoticIndex& psi, double c, long j_lo, long j_hi,
                                   double tolerance_eps, std::size_t samples_per_bracket = 9,
                                   std::size_t max_rows = 200);

}  // namespace lillab::scaling
