#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "vdc/dataset.hpp"
#include "vdc/neighbors.hpp"

namespace vdc {

enum class GraphKind { mutual, symmetric };

std::string_view to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

// Brute-force kNN lists (excluding the point itself), sorted by (dist, id).
// Requires k < n.
KnnLists exact_knn(const Dataset& ds, std::size_t k, Metric metric);

// Weighted kNN graph. Adjacency is symmetric with equal weights in both
// directions and is sorted by (distance, id). The per-node kNN lists the
// graph was built from are kept (truncated to k) because density
// estimates and DNP eligibility read them.
struct KnnGraph {
  std::size_t n = 0;
  std::size_t k = 0;
  GraphKind kind = GraphKind::symmetric;
  std::vector<std::vector<Neighbor>> adjacency;
  KnnLists knn;
  std::vector<double> dk;             // k-th neighbor distance, or the last when short
  std::vector<std::uint8_t> is_short;  // node had fewer than k neighbors

  std::size_t edge_count() const;  // undirected edges
  // Distance to the j-th nearest listed neighbor (1-based), clamped to the
  // list length; +infinity for an empty list.
  double kth_distance(std::size_t node, std::size_t j) const;
};

// Builds a graph from per-node lists sorted ascending by distance. Only
// the first k entries of each list are used. Throws ConfigError on
// out-of-range, self or duplicate ids.
KnnGraph build_graph(const KnnLists& lists, GraphKind kind, std::size_t k);

// Component id per node, numbered by smallest member. Nodes outside
// `mask` get -1 and edges touching them are ignored.
std::vector<std::int64_t> connected_components(
    const KnnGraph& g, std::optional<std::span<const std::uint8_t>> mask = std::nullopt);

std::size_t component_count(std::span<const std::int64_t> components);

// Text dump: header "n k kind", then "u v weight" for every edge with u < v.
void write_graph(std::ostream& out, const KnnGraph& g);

}  // namespace vdc
