#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "vdc/knn_graph.hpp"
#include "vdc/labeling.hpp"

namespace vdc {

// Most frequent label among the node's neighbors, ties to the smallest
// label. A node without neighbors keeps its current label.
std::int64_t lpa_vote(const KnnGraph& g, std::span<const std::int64_t> labels, std::size_t node);

// Label propagation starting from one label per node. Each sweep visits
// nodes in a freshly shuffled order (seeded) and overwrites labels in
// place. Stops after a sweep without changes or after max_iters sweeps.
Labeling lpa(const KnnGraph& g, std::size_t max_iters, std::uint64_t seed);

}  // namespace vdc
