#include <atomic>

#include "lillab/error.hpp"
#include "lillab/simd/kernels.hpp"

namespace lillab::simd {

namespace {

std::atomic<bool> g_force_scalar{false};

bool cpu_has_avx2() {
#if defined(LILLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput("simd kernel: operand lengths differ");
}

}  // namespace

void set_force_scalar(bool force) { g_force_scalar.store(force, std::memory_order_relaxed); }
bool force_scalar() { return g_force_scalar.load(std::memory_order_relaxed); }

Isa active_isa() {
  if (force_scalar()) return Isa::scalar;
#if defined(LILLAB_HAVE_NEON)
  return Isa::neon;
#else
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
#endif
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    default: return "scalar";
  }
}

#if defined(LILLAB_HAVE_AVX2)
#define LILLAB_DISPATCH(fn, ...)                                     \
  do {                                                               \
    if (active_isa() == Isa::avx2) return avx2::fn(__VA_ARGS__);     \
    return scalar::fn(__VA_ARGS__);                                  \
  } while (0)
#elif defined(LILLAB_HAVE_NEON)
#define LILLAB_DISPATCH(fn, ...)                                     \
  do {                                                               \
    if (active_isa() == Isa::neon) return neon::fn(__VA_ARGS__);     \
    return scalar::fn(__VA_ARGS__);                                  \
  } while (0)
#else
#define LILLAB_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  LILLAB_DISPATCH(dot, a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) { LILLAB_DISPATCH(sum_squares, a.data(), a.size()); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size());
  LILLAB_DISPATCH(axpy, alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> x) { LILLAB_DISPATCH(scale, alpha, x.data(), x.size()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  LILLAB_DISPATCH(max_abs_diff, a.data(), b.data(), a.size());
}

void philox_lanes(std::uint32_t key0, std::uint32_t key1, std::uint64_t block, std::uint64_t lane_begin,
                  std::size_t n_lanes, std::uint32_t* out) {
#if defined(LILLAB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::philox_lanes(key0, key1, block, lane_begin, n_lanes, out);
#endif
  scalar::philox_lanes(key0, key1, block, lane_begin, n_lanes, out);
}

}  // namespace lillab::simd
