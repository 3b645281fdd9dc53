#include <cmath>

#include "lillab/simd/kernels.hpp"
#include "lillab/simd/philox.hpp"

namespace lillab::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

void philox_lanes(std::uint32_t key0, std::uint32_t key1, std::uint64_t block, std::uint64_t lane_begin,
                  std::size_t n_lanes, std::uint32_t* out) {
  for (std::size_t i = 0; i < n_lanes; ++i) {
    const std::uint64_t lane = lane_begin + i;
    const PhiloxBlock r = philox4x32(
        {std::uint32_t(block), std::uint32_t(block >> 32), std::uint32_t(lane), std::uint32_t(lane >> 32)},
        key0, key1);
    for (int w = 0; w < 4; ++w) out[w * n_lanes + i] = r[w];
  }
}

}  // namespace lillab::simd::scalar
