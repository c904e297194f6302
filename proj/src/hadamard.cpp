#include "vdc/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "vdc/error.hpp"

namespace vdc {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t next_power_of_two(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

namespace {

// Unscaled butterflies. The first two stages are fused so the short inner
// loops of h = 1 and h = 2 do not dominate at small n.
void fht_raw(double* v, std::size_t n) {
  std::size_t h = 1;
  if (n >= 4) {
    for (std::size_t i = 0; i < n; i += 4) {
      const double a = v[i] + v[i + 1];
      const double b = v[i] - v[i + 1];
      const double c = v[i + 2] + v[i + 3];
      const double d = v[i + 2] - v[i + 3];
      v[i] = a + c;
      v[i + 1] = b + d;
      v[i + 2] = a - c;
      v[i + 3] = b - d;
    }
    h = 4;
  }
  for (; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      double* lo = v + i;
      double* hi = v + i + h;
      for (std::size_t j = 0; j < h; ++j) {
        const double a = lo[j];
        const double b = hi[j];
        lo[j] = a + b;
        hi[j] = a - b;
      }
    }
  }
}

}  // namespace

void fht_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  if (!is_power_of_two(n)) {
    throw DimensionError("Hadamard transform length " + std::to_string(n) +
                         " is not a power of two");
  }
  fht_raw(v.data(), n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& x : v) x *= scale;
}

StructuredSpinner::StructuredSpinner(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed), signs_(3 * dim) {
  if (!is_power_of_two(dim)) {
    throw DimensionError("spinner dimension " + std::to_string(dim) + " is not a power of two");
  }
  std::mt19937_64 rng(seed);
  for (auto& s : signs_) s = (rng() >> 63) ? 1.0 : -1.0;
}

std::vector<double> StructuredSpinner::project(std::span<const double> x) const {
  std::vector<double> out(dim_);
  project_into(x, out);
  return out;
}

void StructuredSpinner::project_into(std::span<const double> x, std::span<double> out) const {
  if (x.size() > dim_) {
    throw DimensionError("input dimension " + std::to_string(x.size()) +
                         " exceeds spinner dimension " + std::to_string(dim_));
  }
  if (out.size() != dim_) throw DimensionError("spinner output buffer has wrong length");
  std::fill(out.begin(), out.end(), 0.0);
  std::copy(x.begin(), x.end(), out.begin());
  double* v = out.data();
  for (std::size_t block = 0; block < 3; ++block) {
    const double* s = signs_.data() + block * dim_;
    for (std::size_t i = 0; i < dim_; ++i) v[i] *= s[i];
    fht_raw(v, dim_);
  }
  // Three orthonormal transforms share one combined scale.
  const double scale = 1.0 / (static_cast<double>(dim_) * std::sqrt(static_cast<double>(dim_)));
  for (std::size_t i = 0; i < dim_; ++i) v[i] *= scale;
}

}  // namespace vdc
