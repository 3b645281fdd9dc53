#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lillab/error.hpp"
#include "lillab/examples/registry.hpp"
#include "lillab/scaling/checks.hpp"
#include "lillab/scaling/index.hpp"
#include "lillab/scaling/rescale.hpp"
#include "lillab/sde/noise.hpp"
#include "lillab/sde/simulate.hpp"

using namespace lillab;
using scaling::AsymptoticIndex;
using scaling::ContractionFamily;

namespace {

const double kEe = std::exp(-std::numbers::e);

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

}  // namespace

TEST(Index, BoundaryProbe) {
  EXPECT_NEAR(scaling::loglog(kEe), 1.0, 1e-15);
  EXPECT_NEAR(scaling::psi_component(1, 1, kEe), std::sqrt(kEe), 1e-15);
  const double eps = kEe * (1.0 - 1e-12);
  EXPECT_NEAR(scaling::psi_component(1, 1, eps) / std::sqrt(eps), 1.0, 1e-11);
  const AsymptoticIndex psi({{1, 1}}, AsymptoticIndex::eps_ceiling());
  EXPECT_THROW(scaling::eval_index(psi, eps), InvalidInput);
  EXPECT_NO_THROW(scaling::eval_index(psi, AsymptoticIndex::eps_ceiling()));
}

TEST(Index, RejectsOutOfRange) {
  const AsymptoticIndex psi({{1, 1}});
  EXPECT_THROW(psi(0.0), InvalidInput);
  EXPECT_THROW(psi(-1e-3), InvalidInput);
  EXPECT_THROW(psi(2e-2), InvalidInput);
  EXPECT_THROW(AsymptoticIndex({{1, 1}}, 0.07), InvalidInput);
}

TEST(Index, StrictlyMonotone) {
  const AsymptoticIndex psi({{3, 1}, {1, 1}, {10, 4}});
  for (double u : {1e-12, 1e-8, 1e-5, 1e-3}) {
    for (double f : {1.001, 2.0, 9.0}) {
      const double v = std::min(u * f, 1e-2);
      const Vec a = psi(u), b = psi(v);
      EXPECT_TRUE((a.array() < b.array()).all()) << u << " " << v;
      EXPECT_TRUE((a.array() > 0.0).all());
    }
  }
}

TEST(Index, PureDiffusiveScale) {
  const AsymptoticIndex psi({{1, 0}, {1, 0}});
  for (double e : {1e-2, 1e-6}) EXPECT_NEAR((psi(e).array() - std::sqrt(e)).abs().maxCoeff(), 0.0, 1e-18);
}

TEST(Rescale, KolmogorovClosedForm) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 2});
  const double eps = 1e-3, L = std::log(std::log(1.0 / eps));
  const auto noise = sde::brownian_path(3, eps / 100.0, eps, 1);
  const auto x = sde::simulate_sde(ex.sde, ex.x0, noise, eps, sde::Scheme::exact_linear);
  const auto y = scaling::rescale_path(x, ex.contraction, ex.index, eps);
  EXPECT_NEAR(y.dt(), 0.01, 1e-15);
  ASSERT_EQ(y.grid_size(), 101u);
  for (std::size_t i = 0; i < y.grid_size(); i += 10) {
    EXPECT_NEAR(y.state(i)[0], x.state(i)[0] / std::sqrt(eps * eps * eps * L), 1e-12 * (1 + std::abs(y.state(i)[0])));
    EXPECT_NEAR(y.state(i)[1], x.state(i)[1] / std::sqrt(eps * L), 1e-12 * (1 + std::abs(y.state(i)[1])));
  }
}

TEST(Rescale, CenterIsFixedAndTimeIsRescaled) {
  const Vec c = v2(0.3, -1.0);
  const auto phi = ContractionFamily::shifted(c);
  const AsymptoticIndex psi({{1, 1}, {3, 1}});
  const double eps = 1e-4;
  const sde::ExplosivePath still(eps / 50.0, 51, std::vector<Vec>(51, c), std::nullopt);
  const auto y = scaling::rescale_path(still, phi, psi, eps);
  for (const auto& s : y.states()) EXPECT_NEAR((s - c).norm(), 0.0, 1e-15);
  EXPECT_NEAR(y.horizon(), 1.0, 1e-12);
}

TEST(Rescale, ExplosionMapsThrough) {
  const double eps = 1e-3;
  std::vector<Vec> st(30, v2(1.0, 1.0));
  const sde::ExplosivePath x(eps / 100.0, 101, st, 30);
  const auto y = scaling::rescale_path(x, ContractionFamily::diagonal(2), AsymptoticIndex({{1, 1}, {1, 1}}), eps);
  ASSERT_TRUE(y.exploded());
  EXPECT_NEAR(y.explosion_time(), 0.3, 1e-12);
}

TEST(Rescale, ShortPathRejected) {
  const double eps = 1e-3;
  const sde::ExplosivePath x(eps / 100.0, 50, std::vector<Vec>(50, v2(0, 0)), std::nullopt);
  EXPECT_THROW(scaling::rescale_path(x, ContractionFamily::diagonal(2), AsymptoticIndex({{1, 1}, {1, 1}}), eps),
               InvalidInput);
}

TEST(TransformedCoefficients, KolmogorovDriftUnchanged) {
  const auto ex = examples::get_example("iterated_kolmogorov", {.d = 3});
  for (double eps : {1e-2, 1e-5}) {
    const auto tc = scaling::transformed_coefficients(ex.sde, ex.contraction, ex.index, eps);
    const Vec y = (Vec(3) << 0.4, -1.2, 2.0).finished();
    EXPECT_NEAR((tc.rate_system.drift(y) - ex.sde.drift(y)).norm(), 0.0, 1e-12);
    EXPECT_NEAR((tc.rate_system.diffusion(y) - ex.sde.diffusion(y)).norm(), 0.0, 1e-12);
    EXPECT_NEAR(tc.noise_scale, 1.0 / std::sqrt(scaling::loglog(eps)), 1e-15);
  }
}

TEST(TransformedCoefficients, QuadraticDisplay) {
  const auto ex = examples::get_example("quadratic");
  const double eps = 1e-3, L = scaling::loglog(eps);
  const auto tc = scaling::transformed_coefficients(ex.sde, ex.contraction, ex.index, eps);
  for (const Vec& y : {v2(0.5, 0.7), v2(-2.0, 1.5), v2(3.0, -0.1)}) {
    const Vec b = tc.rate_system.drift(y);
    const double e3 = eps * eps * eps * L;
    EXPECT_NEAR(b[0], e3 * y[0] * y[0] - y[1] * y[1], 1e-12);
    EXPECT_NEAR(b[1], 2.0 * e3 * y[0] * y[1], 1e-12);
  }
}

TEST(TransformedCoefficients, BrownianIdentity) {
  const auto ex = examples::get_example("brownian", {.d = 3});
  const auto tc = scaling::transformed_coefficients(ex.sde, ex.contraction, ex.index, 1e-4);
  const Vec y = Vec::LinSpaced(3, -1.0, 2.0);
  EXPECT_EQ(tc.rate_system.drift(y), Vec::Zero(3));
  EXPECT_NEAR((tc.rate_system.diffusion(y) - Mat::Identity(3, 3)).norm(), 0.0, 1e-14);
}

TEST(TransformedCoefficients, ZeroDriftStaysZero) {
  const auto sys = sde::make_linear_system(Mat::Zero(2, 2), Mat::Identity(2, 2), "zero drift");
  const AsymptoticIndex psi({{3, 1}, {1, 1}});
  for (double eps : {1e-2, 1e-4, 1e-8}) {
    const auto tc = scaling::transformed_coefficients(sys, ContractionFamily::diagonal(2), psi, eps);
    EXPECT_EQ(tc.rate_system.drift(v2(1.0, -3.0)), Vec::Zero(2));
  }
}

TEST(TransformedCoefficients, AffineKindRejected) {
  const auto ex = examples::get_example("shifted_kolmogorov");
  EXPECT_THROW(scaling::transformed_coefficients(ex.sde, ex.contraction, ex.index, 1e-3), InvalidInput);
  EXPECT_NO_THROW(scaling::transformed_coefficients_at(ex.sde, ex.contraction, ex.index, 1e-3, 0.5));
}

TEST(Contraction, InverseRoundTrip) {
  const AsymptoticIndex psi({{7, 3}, {1, 1}, {4, 2}});
  for (const auto& phi : {ContractionFamily::diagonal(3), ContractionFamily::shifted(Vec::LinSpaced(3, -1, 1))}) {
    for (double eps : {1e-2, 1e-6}) {
      const Vec a = psi(eps);
      for (int s = 0; s < 5; ++s) {
        const Vec y = Vec::LinSpaced(3, -2.0 + s, 1.0 + 0.5 * s);
        const Vec back = phi.invert(a, phi.apply(a, y));
        EXPECT_NEAR((back - y).norm(), 0.0, 1e-13 * (1.0 + y.norm()));
      }
    }
  }
}

namespace {

std::vector<std::pair<Vec, Vec>> sample_pairs() {
  return {{v2(0, 0), v2(1, 1)}, {v2(-1, 2), v2(3, -1)}, {v2(0.5, 0.5), v2(0.5, -0.5)}};
}

std::vector<std::pair<Vec, Vec>> alpha_pairs() {
  const AsymptoticIndex psi({{3, 1}, {1, 1}});
  return {{psi(1e-2), psi(1e-3)}, {psi(1e-4), psi(1e-6)}, {v2(1, 1), v2(0.5, 0.25)}};
}

}  // namespace

TEST(ContractionCheck, DiagonalPasses) {
  const auto rep = scaling::check_contraction_family(ContractionFamily::diagonal(2), sample_pairs(), alpha_pairs(), 1e-6);
  EXPECT_TRUE(rep.all_pass()) << rep.to_json().dump();
  EXPECT_FALSE(rep.modulus.empty());
}

TEST(ContractionCheck, AmplifyingFamilyFailsNonexpansive) {
  scaling::GenericContraction amp{Vec::Zero(2), [](const Vec& a, const Vec& y) -> Vec { return a.cwiseProduct(y); },
                                  [](const Vec& a, const Vec& y) -> Vec { return y.cwiseQuotient(a); }};
  const auto rep = scaling::check_contraction_family(amp, sample_pairs(), alpha_pairs(), 1e-6);
  EXPECT_FALSE(rep.property("nonexpansive").pass);
  EXPECT_TRUE(rep.property("fixed_center").pass);
}

TEST(ContractionCheck, ShiftedCenter) {
  const Vec x = v2(1.0, -2.0);
  const auto phi = ContractionFamily::shifted(x);
  const auto rep = scaling::check_contraction_family(phi, sample_pairs(), alpha_pairs(), 1e-6);
  EXPECT_TRUE(rep.property("fixed_center").pass);
  const Vec a = v2(0.1, 0.2);
  EXPECT_EQ(phi.apply(a, x), x);
  EXPECT_GT(phi.apply(a, Vec::Zero(2)).norm(), 1.0);
}

TEST(IndexCheck, RatioStabilityNearOne) {
  const AsymptoticIndex psi({{1, 1}});
  const auto rep = scaling::check_asymptotic_index(psi, 0.99, 1000, 10000, 0.02);
  EXPECT_TRUE(rep.properties.all_pass()) << rep.to_json().dump();
  ASSERT_TRUE(rep.threshold_j.has_value());
  for (const auto& row : rep.rows) {
    EXPECT_LE(row.max_deviation, row.closed_form_bound * (1 + 1e-9) + 1e-15);
    if (row.j >= *rep.threshold_j) EXPECT_LT(row.max_deviation, 0.02);
  }
}

TEST(IndexCheck, BoundShrinksAsRatioApproachesOne) {
  double prev = kInfinity;
  for (double c : {0.5, 0.8, 0.9, 0.99, 0.999}) {
    const double b = scaling::index_ratio_bound(1, 1, c, 5000);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(IndexCheck, PureScaleBound) {
  for (double c : {0.5, 0.9})
    for (long j : {10L, 1000L}) EXPECT_NEAR(scaling::index_ratio_bound(1, 0, c, j), 1.0 / std::sqrt(c) - 1.0, 1e-15);
}
