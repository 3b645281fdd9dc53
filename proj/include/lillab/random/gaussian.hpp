#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace lillab::random {

// Well-known stream ids. Distinct streams under one seed are independent.
inline constexpr std::uint64_t kStreamIncrements = 0;
inline constexpr std::uint64_t kStreamAuxiliary = 1;
inline constexpr std::uint64_t kStreamLil = 2;
inline constexpr std::uint64_t kStreamOptimizer = 3;
inline constexpr std::uint64_t kStreamSampling = 4;

// Counter-based standard normals addressed by (lane, index).
// Normal 2b and 2b+1 of a lane come from one Philox block b via Box-Muller,
// so any entry can be regenerated without touching the others.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream);

  double normal(std::uint64_t lane, std::uint64_t index) const;
  void normals(std::uint64_t lane, std::uint64_t first_index, std::span<double> out) const;

  // Uniform in (0, 1] for (lane, index); uses its own block layout (index = block).
  double uniform(std::uint64_t lane, std::uint64_t index) const;

  // Normals 2*block and 2*block+1 for lanes [lane_begin, lane_begin + n): SIMD batch path.
  void lane_pair(std::uint64_t block, std::uint64_t lane_begin, std::span<double> even,
                 std::span<double> odd) const;

  std::uint32_t key0() const { return key0_; }
  std::uint32_t key1() const { return key1_; }

 private:
  std::uint32_t key0_;
  std::uint32_t key1_;
};

// Maps two 32-bit words to a uniform in (0, 1].
double to_unit_interval(std::uint32_t hi, std::uint32_t lo);
void box_muller(double u1, double u2, double& z0, double& z1);

}  // namespace lillab::random
