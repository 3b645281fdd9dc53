// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "lillab/simd/kernels.hpp"
#include "lillab/simd/philox.hpp"

namespace lillab::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

// 32x32 -> 64 multiply of every 32-bit lane; returns (hi, lo) words in place.
inline void mulhilo(__m256i x, __m256i m, __m256i& hi, __m256i& lo) {
  const __m256i even = _mm256_mul_epu32(x, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares(const double* a, std::size_t n) { return dot(a, a, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  double out = hmax(m);
  for (; i < n; ++i) out = std::fmax(out, std::fabs(a[i] - b[i]));
  return out;
}

void philox_lanes(std::uint32_t key0, std::uint32_t key1, std::uint64_t block, std::uint64_t lane_begin,
                  std::size_t n_lanes, std::uint32_t* out) {
  const __m256i m0 = _mm256_set1_epi32(int(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(int(kPhiloxM1));
  std::size_t i = 0;
  for (; i + 8 <= n_lanes; i += 8) {
    alignas(32) std::uint32_t lo_words[8];
    alignas(32) std::uint32_t hi_words[8];
    for (int l = 0; l < 8; ++l) {
      const std::uint64_t lane = lane_begin + i + std::uint64_t(l);
      lo_words[l] = std::uint32_t(lane);
      hi_words[l] = std::uint32_t(lane >> 32);
    }
    __m256i c0 = _mm256_set1_epi32(int(std::uint32_t(block)));
    __m256i c1 = _mm256_set1_epi32(int(std::uint32_t(block >> 32)));
    __m256i c2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo_words));
    __m256i c3 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi_words));
    std::uint32_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
      __m256i hi0, lo0, hi1, lo1;
      mulhilo(c0, m0, hi0, lo0);
      mulhilo(c2, m1, hi1, lo1);
      const __m256i vk0 = _mm256_set1_epi32(int(k0));
      const __m256i vk1 = _mm256_set1_epi32(int(k1));
      c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), vk0);
      c1 = lo1;
      c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), vk1);
      c3 = lo0;
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 0 * n_lanes + i), c0);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 1 * n_lanes + i), c1);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 2 * n_lanes + i), c2);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 3 * n_lanes + i), c3);
  }
  for (; i < n_lanes; ++i) {
    const std::uint64_t lane = lane_begin + i;
    const PhiloxBlock r = philox4x32(
        {std::uint32_t(block), std::uint32_t(block >> 32), std::uint32_t(lane), std::uint32_t(lane >> 32)},
        key0, key1);
    for (int w = 0; w < 4; ++w) out[w * n_lanes + i] = r[w];
  }
}

}  // namespace lillab::simd::avx2
