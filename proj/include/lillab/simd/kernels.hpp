#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace lillab::simd {

enum class Isa { scalar, avx2, neon };

Isa active_isa();
std::string_view isa_name(Isa isa);

// Forces the scalar reference kernels regardless of CPU support.
void set_force_scalar(bool force);
bool force_scalar();

double dot(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// Philox4x32-10 over consecutive lanes: lane i uses counter
// (block lo, block hi, (lane_begin+i) lo, (lane_begin+i) hi).
// Output is word-major: out[w * n_lanes + i] for w in 0..3.
void philox_lanes(std::uint32_t key0, std::uint32_t key1, std::uint64_t block, std::uint64_t lane_begin,
                  std::size_t n_lanes, std::uint32_t* out);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
void philox_lanes(std::uint32_t key0, std::uint32_t key1, std::uint64_t block, std::uint64_t lane_begin,
                  std::size_t n_lanes, std::uint32_t* out);
}  // namespace scalar

#if defined(LILLAB_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
void philox_lanes(std::uint32_t key0, std::uint32_t key1, std::uint64_t block, std::uint64_t lane_begin,
                  std::size_t n_lanes, std::uint32_t* out);
}  // namespace avx2
#endif

#if defined(LILLAB_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace neon
#endif

}  // namespace lillab::simd
