#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vdc {

// Orthonormal Walsh-Hadamard transform in place (scaled by 1/sqrt(D)), so
// applying it twice returns the input. Throws DimensionError unless the
// length is a power of two.
void fht_inplace(std::span<double> v);

bool is_power_of_two(std::size_t v);
std::size_t next_power_of_two(std::size_t v);

// Structured spinner H D3 H D2 H D1: three random sign diagonals
// interleaved with orthonormal Hadamard transforms. Projecting a
// length-d vector (d <= D, zero padded) costs O(D log D) and behaves like
// a D x D Gaussian rotation. Immutable once built.
class StructuredSpinner {
 public:
  StructuredSpinner(std::size_t dim, std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<double> project(std::span<const double> x) const;
  // Writes into `out` (length dim()), avoiding an allocation per call.
  void project_into(std::span<const double> x, std::span<double> out) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::vector<double> signs_;  // 3 * dim_, each +1 or -1
};

}  // namespace vdc
