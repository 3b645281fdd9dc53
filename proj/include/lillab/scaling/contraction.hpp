#pragma once

#include <string_view>

#include "lillab/types.hpp"

namespace lillab::scaling {

enum class ContractionKind { diagonal, shifted_diagonal, affine_detrended };

std::string_view contraction_kind_name(ContractionKind kind);

// Phi_alpha(y)_i = c_i + (y_i - c_i) / alpha_i. The affine-detrended kind also
// removes a linear trend: Phi_{alpha,t}(x) = c + t v + (x - c - eps t v) / alpha,
// which maps x_{eps t} to y_t.
class ContractionFamily {
 public:
  static ContractionFamily diagonal(std::size_t dim);
  static ContractionFamily shifted(Vec center);
  static ContractionFamily affine_detrended(Vec center, Vec drift_vector);

  ContractionKind kind() const { return kind_; }
  const Vec& center() const { return center_; }
  const Vec& drift_vector() const { return drift_vector_; }
  std::size_t dim() const { return std::size_t(center_.size()); }
  bool time_dependent() const { return kind_ == ContractionKind::affine_detrended; }

  Vec apply(const Vec& alpha, const Vec& y) const;
  Vec invert(const Vec& alpha, const Vec& y) const;
  // Time-dependent forms; eps and t are ignored for the non-detrended kinds.
  Vec apply(const Vec& alpha, const Vec& y, double eps, double t) const;
  Vec invert(const Vec& alpha, const Vec& y, double eps, double t) const;

 private:
  ContractionFamily(ContractionKind kind, Vec center, Vec drift_vector);
  ContractionKind kind_;
  Vec center_;
  Vec drift_vector_;
};

}  // namespace lillab::scaling
