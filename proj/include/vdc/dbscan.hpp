#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vdc/dataset.hpp"
#include "vdc/knn_graph.hpp"
#include "vdc/labeling.hpp"

namespace vdc {

struct DbscanParams {
  double eps = 0.0;
  std::size_t min_pts = 1;

  void validate() const;
};

struct DbscanResult {
  Labeling labeling;               // -1 = noise
  std::vector<std::uint8_t> core;  // |B_eps(x)| >= minPts, x itself counted
};

// Brute-force DBSCAN. Clusters are numbered by their smallest core point;
// a border point joins the cluster of its smallest-id core neighbor.
DbscanResult dbscan(const Dataset& ds, const DbscanParams& params, Metric metric);

// Same, restricted to the points in `active` (ascending ids). Labels and
// core flags are indexed like `active`.
DbscanResult dbscan_subset(const Dataset& ds, std::span<const std::uint32_t> active,
                           const DbscanParams& params, Metric metric);

// Volume of the unit ball in R^d.
double unit_ball_volume(std::size_t d);

// Radius at which a ball around a point of density f holds k of n points
// in expectation: (k / (n V_d f))^(1/d).
double eps_from_density(double k, double n, std::size_t d, double f);

struct DbscanStarConfig {
  std::size_t k = 10;             // minPts
  std::vector<double> eps_list;  // strictly increasing; the smallest runs first

  // Radii for density levels f (any order), sorted into run order.
  static DbscanStarConfig from_densities(std::size_t k, std::size_t n, std::size_t d,
                                         std::span<const double> densities);
  void validate() const;
};

struct DbscanStarResult {
  Labeling labeling;                 // -1 = never clustered
  std::vector<std::int64_t> level;  // eps_list index where the point was core, -1 if never
};

// Sequential DBSCAN with minPts = k over increasing radii. Each run only
// sees the points that were not core in any earlier run. Cluster ids are
// allocated level by level, then by smallest core point. A point that is
// core at some level takes that level's cluster; a border point keeps the
// first cluster that claimed it.
DbscanStarResult dbscan_star(const Dataset& ds, const DbscanStarConfig& cfg, Metric metric);

// kNN density estimate k / (n V_d d_k(x)^d); +infinity when d_k = 0.
struct KnnDensityEstimate {
  std::vector<double> values;
};

KnnDensityEstimate knn_density(const KnnGraph& g, std::size_t dim);

}  // namespace vdc
