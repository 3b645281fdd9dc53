#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lillab/random/gaussian.hpp"
#include "lillab/simd/kernels.hpp"
#include "lillab/simd/philox.hpp"

using namespace lillab;

namespace {

std::vector<double> ramp(std::size_t n, double a, double b) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(a * double(i) + b) * (1.0 + 0.01 * double(i));
  return v;
}

}  // namespace

// Known-answer vectors of Philox4x32-10.
TEST(Philox, KnownAnswerZero) {
  const auto r = simd::philox4x32({0, 0, 0, 0}, 0, 0);
  EXPECT_EQ(r[0], 0x6627e8d5u);
  EXPECT_EQ(r[1], 0xe169c58du);
  EXPECT_EQ(r[2], 0xbc57ac4cu);
  EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto r = simd::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, 0xffffffffu, 0xffffffffu);
  EXPECT_EQ(r[0], 0x408f276du);
  EXPECT_EQ(r[1], 0x41c83b0eu);
  EXPECT_EQ(r[2], 0xa20bc7c6u);
  EXPECT_EQ(r[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto r = simd::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, 0xa4093822u, 0x299f31d0u);
  EXPECT_EQ(r[0], 0xd16cfe09u);
  EXPECT_EQ(r[1], 0x94fdccebu);
  EXPECT_EQ(r[2], 0x5001e420u);
  EXPECT_EQ(r[3], 0x24126ea1u);
}

TEST(Philox, ScalarLanesMatchReference) {
  const std::size_t n = 37;
  std::vector<std::uint32_t> out(4 * n);
  const std::uint64_t block = 0x123456789abcdefull, lane0 = 0xfffffff0ull;
  simd::scalar::philox_lanes(17, 99, block, lane0, n, out.data());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t lane = lane0 + i;
    const auto ref = simd::philox4x32(
        {std::uint32_t(block), std::uint32_t(block >> 32), std::uint32_t(lane), std::uint32_t(lane >> 32)}, 17, 99);
    for (int w = 0; w < 4; ++w) EXPECT_EQ(out[w * n + i], ref[w]) << "lane " << i << " word " << w;
  }
}

#if defined(LILLAB_HAVE_AVX2)
class Avx2Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (simd::active_isa() != simd::Isa::avx2) GTEST_SKIP() << "CPU lacks AVX2";
  }
};

TEST_F(Avx2Equivalence, Philox) {
  for (std::size_t n : {1u, 7u, 8u, 9u, 64u, 203u}) {
    std::vector<std::uint32_t> a(4 * n), b(4 * n);
    simd::scalar::philox_lanes(0xdeadbeef, 0x01234567, 42, 0xfffffffcull, n, a.data());
    simd::avx2::philox_lanes(0xdeadbeef, 0x01234567, 42, 0xfffffffcull, n, b.data());
    EXPECT_EQ(a, b) << "n = " << n;
  }
}

TEST_F(Avx2Equivalence, Reductions) {
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 1023u}) {
    const auto x = ramp(n, 0.37, 0.1), y = ramp(n, 1.3, -0.4);
    const double tol = 1e-13 * (1.0 + double(n));
    EXPECT_NEAR(simd::scalar::dot(x.data(), y.data(), n), simd::avx2::dot(x.data(), y.data(), n), tol);
    EXPECT_NEAR(simd::scalar::sum_squares(x.data(), n), simd::avx2::sum_squares(x.data(), n), tol);
    EXPECT_EQ(simd::scalar::max_abs_diff(x.data(), y.data(), n), simd::avx2::max_abs_diff(x.data(), y.data(), n));
  }
}

TEST_F(Avx2Equivalence, Updates) {
  for (std::size_t n : {1u, 6u, 33u, 1024u}) {
    const auto x = ramp(n, 0.11, 0.0);
    auto y1 = ramp(n, 0.7, 2.0), y2 = y1;
    simd::scalar::axpy(-1.75, x.data(), y1.data(), n);
    simd::avx2::axpy(-1.75, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1.0 + std::abs(y1[i])));
    simd::scalar::scale(0.3, y1.data(), n);
    simd::avx2::scale(0.3, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1.0 + std::abs(y1[i])));
  }
}
#endif

TEST(Dispatch, ForceScalarGivesSameNormals) {
  random::GaussianStream g(7, 0);
  std::vector<double> e1(40), o1(40), e2(40), o2(40);
  simd::set_force_scalar(false);
  g.lane_pair(5, 3, e1, o1);
  simd::set_force_scalar(true);
  g.lane_pair(5, 3, e2, o2);
  simd::set_force_scalar(false);
  EXPECT_EQ(e1, e2);
  EXPECT_EQ(o1, o2);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(e1[i], g.normal(3 + i, 10));
    EXPECT_EQ(o1[i], g.normal(3 + i, 11));
  }
}

TEST(Dispatch, SpanKernels) {
  const auto x = ramp(100, 0.2, 0.3), y = ramp(100, 0.5, 0.1);
  double ref = 0.0;
  for (std::size_t i = 0; i < 100; ++i) ref += x[i] * y[i];
  EXPECT_NEAR(simd::dot(x, y), ref, 1e-12);
  EXPECT_FALSE(simd::isa_name(simd::active_isa()).empty());
}
