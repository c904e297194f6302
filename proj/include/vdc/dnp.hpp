#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "vdc/knn_graph.hpp"
#include "vdc/labeling.hpp"
#include "vdc/neighbors.hpp"

namespace vdc {

// Which list the "some neighbor already carries the predecessor's label"
// test scans when a popped node is labeled.
enum class DnpCheckSet {
  stored_list,  // the node's full stored list (N(x) for CEOs input)
  knn_only,     // only its first k entries
};

// What happens to a popped node that fails the label test. The default
// leaves it unlabeled, so it is either reached again from a closer labeled
// neighbor or seeds its own cluster when the density order reaches it.
// new_cluster labels it on the spot and keeps propagating from it.
enum class DnpIneligible {
  defer,
  new_cluster,
};

struct DnpParams {
  std::size_t k = 10;
  // Density divisor: density and priority use the k'-th neighbor distance,
  // k' = max(1, floor(k / c)).
  double c = 1.0;
  DnpCheckSet check = DnpCheckSet::knn_only;
  DnpIneligible ineligible = DnpIneligible::defer;

  std::size_t kprime() const;
  void validate() const;
};

struct DnpQueueEntry {
  double priority;  // d(pred, node) + d_k'(node)
  std::uint32_t node;
  std::uint32_t pred;
};

// Optional instrumentation; every callback may be empty.
struct DnpObserver {
  std::function<void(std::uint32_t node, double dkp)> on_seed;
  std::function<void(std::uint32_t node, double before, double after)> on_reach_update;
  std::function<void(const DnpQueueEntry&)> on_stale_pop;
  std::function<void(std::uint32_t node, std::uint32_t pred, bool new_cluster)> on_pop_label;
  std::function<void(const DnpQueueEntry&)> on_defer;
};

// Density-aware neighborhood propagation. Points are visited by ascending
// k'-th neighbor distance; each unlabeled visit seeds a cluster that grows
// through a min-priority queue keyed by d(pred, x) + d_k'(x). A node is
// pushed only while unlabeled and when the edge improves its best
// reachability distance. A popped node takes its predecessor's label if
// one of its listed neighbors already carries it; otherwise see
// DnpIneligible. Deterministic: ties resolve by (priority, node, pred).
//
// Lists input (exact kNN lists or distances derived from CEOs
// neighborhoods): pushes go to the whole stored list.
Labeling dnp(const KnnLists& lists, const DnpParams& params, const DnpObserver* observer = nullptr);

// CEOs neighborhoods, distance 1 - dot.
Labeling dnp(const NeighborhoodSet& nbrs, const DnpParams& params,
             const DnpObserver* observer = nullptr);

// Graph input: pushes follow the graph adjacency; eligibility and density
// read the kNN lists the graph was built from.
Labeling dnp(const KnnGraph& g, const DnpParams& params, const DnpObserver* observer = nullptr);

}  // namespace vdc
