#include "lillab/scaling/contraction.hpp"

#include "lillab/error.hpp"

namespace lillab::scaling {

std::string_view contraction_kind_name(ContractionKind kind) {
  switch (kind) {
    case ContractionKind::diagonal: return "diagonal";
    case ContractionKind::shifted_diagonal: return "shifted_diagonal";
    default: return "affine_detrended";
  }
}

ContractionFamily::ContractionFamily(ContractionKind kind, Vec center, Vec drift_vector)
    : kind_(kind), center_(std::move(center)), drift_vector_(std::move(drift_vector)) {
  require(center_.size() >= 1, "contraction: dimension must be positive");
  require(center_.allFinite() && drift_vector_.allFinite(), "contraction: non-finite parameters");
}

ContractionFamily ContractionFamily::diagonal(std::size_t dim) {
  return ContractionFamily(ContractionKind::diagonal, Vec::Zero(Eigen::Index(dim)), Vec::Zero(Eigen::Index(dim)));
}

ContractionFamily ContractionFamily::shifted(Vec center) {
  Vec zero = Vec::Zero(center.size());
  return ContractionFamily(ContractionKind::shifted_diagonal, std::move(center), std::move(zero));
}

ContractionFamily ContractionFamily::affine_detrended(Vec center, Vec drift_vector) {
  require(center.size() == drift_vector.size(), "contraction: drift vector dimension mismatch");
  return ContractionFamily(ContractionKind::affine_detrended, std::move(center), std::move(drift_vector));
}

namespace {

void check_alpha(const Vec& alpha, const Vec& y, const Vec& center) {
  require(alpha.size() == center.size() && y.size() == center.size(), "contraction: dimension mismatch");
  require((alpha.array() > 0.0).all(), "contraction: alpha must be positive");
}

}  // namespace

Vec ContractionFamily::apply(const Vec& alpha, const Vec& y) const {
  if (time_dependent()) throw InvalidInput("contraction: affine_detrended needs (eps, t)");
  return apply(alpha, y, 0.0, 0.0);
}

Vec ContractionFamily::invert(const Vec& alpha, const Vec& y) const {
  if (time_dependent()) throw InvalidInput("contraction: affine_detrended needs (eps, t)");
  return invert(alpha, y, 0.0, 0.0);
}

Vec ContractionFamily::apply(const Vec& alpha, const Vec& y, double eps, double t) const {
  check_alpha(alpha, y, center_);
  if (!time_dependent()) return center_ + ((y - center_).array() / alpha.array()).matrix();
  return center_ + t * drift_vector_ + ((y - center_ - eps * t * drift_vector_).array() / alpha.array()).matrix();
}

Vec ContractionFamily::invert(const Vec& alpha, const Vec& y, double eps, double t) const {
  check_alpha(alpha, y, center_);
  if (!time_dependent()) return center_ + ((y - center_).array() * alpha.array()).matrix();
  return center_ + eps * t * drift_vector_ + ((y - center_ - t * drift_vector_).array() * alpha.array()).matrix();
}

}  // namespace lillab::scaling
