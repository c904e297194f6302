#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vdc/knn_graph.hpp"
#include "vdc/labeling.hpp"

namespace vdc {

// How edge distances become non-negative affinities for modularity.
enum class EdgeWeighting {
  cosine_similarity,  // w = max(0, 1 - d)
  exp_decay,          // w = exp(-d / mean edge distance)
};

EdgeWeighting default_weighting(Metric metric);

// Undirected weighted graph in adjacency form. A self-loop is stored once
// and its weight is the matrix entry A_uu; every other edge is stored in
// both directions.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;

  std::size_t size() const { return adj.size(); }
  double degree(std::size_t u) const;
  double total_weight() const;  // sum of degrees (2m)
};

WeightedGraph similarity_graph(const KnnGraph& g, EdgeWeighting weighting);

// Newman-Girvan modularity of a partition of `g`.
double modularity(const WeightedGraph& g, std::span<const std::int64_t> community);

struct LouvainResult {
  Labeling labeling;
  std::vector<double> level_modularity;  // after each aggregation level
};

// Two-phase Louvain: local moving in a seeded node order, then community
// aggregation, repeated while modularity improves.
LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed);
LouvainResult louvain(const KnnGraph& g, EdgeWeighting weighting, std::uint64_t seed);

}  // namespace vdc
