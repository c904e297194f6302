#pragma once

#include <cstddef>
#include <cstdint>

#include "vdc/dataset.hpp"

namespace vdc {

// Random Fourier feature map f(x) = 1/sqrt(d') [sin(w_i.x), cos(w_i.x)]_i,
// laid out as interleaved (sin_i, cos_i) pairs. For an l2 target the w_i
// coordinates are Gaussian with standard deviation 1/sigma, giving
// E[f(x).f(y)] = exp(-|x-y|_2^2 / (2 sigma^2)); for l1 they are Cauchy with
// scale 1/sigma, giving exp(-|x-y|_1 / sigma).
struct KernelFeatureConfig {
  Metric target_metric = Metric::l2;
  std::size_t d_prime = 1024;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

Dataset kernel_map(const Dataset& ds, const KernelFeatureConfig& cfg);

// Closed-form kernel the map approximates in expectation.
double kernel_value(Metric target, double sigma, std::span<const double> x,
                    std::span<const double> y);

// Mean pairwise distance (under `metric`) over a seeded uniform sample of at
// most `sample` rows; the default bandwidth for kernel_map.
double default_sigma(const Dataset& ds, Metric metric, std::size_t sample = 1000,
                     std::uint64_t seed = 0);

}  // namespace vdc
