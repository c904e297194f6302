#pragma once

// Test-only data generators and brute-force oracles. Nothing here calls
// into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "vdc/dataset.hpp"
#include "vdc/neighbors.hpp"

namespace vdc::test {

struct Labeled {
  Dataset data;
  std::vector<std::int64_t> truth;
};

// Isotropic Gaussian blobs in `centers.size()`-many groups.
inline Labeled gaussian_blobs(const std::vector<std::vector<double>>& centers,
                              const std::vector<double>& sigmas,
                              const std::vector<std::size_t>& counts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = centers.front().size();
  std::vector<double> values;
  Labeled out;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i) {
      for (std::size_t j = 0; j < d; ++j) values.push_back(centers[c][j] + sigmas[c] * normal(rng));
      out.truth.push_back(static_cast<std::int64_t>(c));
    }
  }
  out.data = Dataset(out.truth.size(), d, std::move(values), Metric::l2);
  return out;
}

// Unit vectors scattered around `clusters` random unit centers.
inline Labeled clustered_unit_vectors(std::size_t n, std::size_t d, std::size_t clusters,
                                      double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> centers(clusters, std::vector<double>(d));
  for (auto& c : centers) {
    double s = 0.0;
    for (auto& v : c) {
      v = normal(rng);
      s += v * v;
    }
    for (auto& v : c) v /= std::sqrt(s);
  }
  std::vector<double> values;
  values.reserve(n * d);
  Labeled out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % clusters;
    std::vector<double> p(d);
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      p[j] = centers[c][j] + spread * normal(rng);
      s += p[j] * p[j];
    }
    for (auto& v : p) values.push_back(v / std::sqrt(s));
    out.truth.push_back(static_cast<std::int64_t>(c));
  }
  out.data = Dataset(n, d, std::move(values), Metric::cosine);
  out.data.mark_normalized(true);
  return out;
}

inline Dataset uniform_points(std::size_t n, std::size_t d, double lo, double hi, std::uint64_t seed,
                              Metric metric = Metric::l2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> values(n * d);
  for (auto& v : values) v = u(rng);
  return Dataset(n, d, std::move(values), metric);
}

// Quadratic scan: full sort of every candidate by (distance, id).
inline KnnLists brute_force_knn(const Dataset& ds, std::size_t k, Metric metric) {
  KnnLists out(ds.n());
  for (std::size_t q = 0; q < ds.n(); ++q) {
    std::vector<Neighbor> all;
    for (std::size_t x = 0; x < ds.n(); ++x) {
      if (x == q) continue;
      double dist = 0.0;
      const auto a = ds.row(q);
      const auto b = ds.row(x);
      if (metric == Metric::l2) {
        for (std::size_t j = 0; j < a.size(); ++j) dist += (a[j] - b[j]) * (a[j] - b[j]);
        dist = std::sqrt(dist);
      } else if (metric == Metric::l1) {
        for (std::size_t j = 0; j < a.size(); ++j) dist += std::abs(a[j] - b[j]);
      } else {
        double ab = 0, aa = 0, bb = 0;
        for (std::size_t j = 0; j < a.size(); ++j) {
          ab += a[j] * b[j];
          aa += a[j] * a[j];
          bb += b[j] * b[j];
        }
        dist = std::max(0.0, 1.0 - ab / std::sqrt(aa * bb));
      }
      all.push_back({static_cast<std::uint32_t>(x), dist});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& l, const Neighbor& r) {
      return l.dist != r.dist ? l.dist < r.dist : l.id < r.id;
    });
    all.resize(k);
    out[q] = std::move(all);
  }
  return out;
}

inline std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "vdc_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

// Pair-counting Rand-based ARI straight from the definition.
inline double ari_by_pairs(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  const std::size_t n = a.size();
  double both = 0, in_a = 0, in_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      both += sa && sb;
      in_a += sa;
      in_b += sb;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double expected = in_a * in_b / pairs;
  const double max_index = 0.5 * (in_a + in_b);
  if (max_index == expected) return a == b ? 1.0 : 0.0;
  return (both - expected) / (max_index - expected);
}

}  // namespace vdc::test

#include "vdc/dbscan.hpp"
#include "vdc/knn_graph.hpp"

namespace vdc::test {

// Three 2-D Gaussian blobs, 1000 points each, sigma 4, 2 and 1, so the peak
// densities stand 1:4:16. Each level f_i is the density on blob i's
// 3.3-sigma contour, which keeps the core set of every level inside one
// blob and well connected.
struct CoreComponentOutcome {
  double ari = 0.0;
  std::size_t core_points = 0;
  std::size_t star_clusters = 0;
  std::size_t components = 0;
};

inline CoreComponentOutcome core_component_trial(std::uint64_t seed) {
  const std::vector<double> sigmas{4.0, 2.0, 1.0};
  const auto blobs = gaussian_blobs({{0.0, 0.0}, {40.0, 0.0}, {0.0, 40.0}}, sigmas,
                                    {1000, 1000, 1000}, seed);
  const std::size_t n = blobs.data.n();
  const auto k = static_cast<std::size_t>(std::ceil(8.0 * std::log(static_cast<double>(n))));
  const double pi = 3.14159265358979323846;
  std::vector<double> levels;
  for (double s : sigmas) levels.push_back((1.0 / 3.0) / (2.0 * pi * s * s) * std::exp(-3.3 * 3.3 / 2.0));
  const auto star = dbscan_star(blobs.data, DbscanStarConfig::from_densities(k, n, 2, levels), Metric::l2);

  std::vector<std::uint8_t> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = star.level[i] >= 0;
  const auto g = build_graph(exact_knn(blobs.data, k, Metric::l2), GraphKind::mutual, k);
  const auto comp = connected_components(g, std::span<const std::uint8_t>(core));

  std::vector<std::int64_t> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    a.push_back(comp[i]);
    b.push_back(star.labeling.labels[i]);
  }
  CoreComponentOutcome out;
  out.core_points = a.size();
  out.ari = a.empty() ? 0.0 : ari_by_pairs(a, b);
  std::vector<std::int64_t> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  out.components = static_cast<std::size_t>(std::unique(sa.begin(), sa.end()) - sa.begin());
  out.star_clusters = static_cast<std::size_t>(std::unique(sb.begin(), sb.end()) - sb.begin());
  return out;
}

}  // namespace vdc::test
