#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vdc {

// Cluster id per point; -1 marks an unassigned (noise) point.
struct Labeling {
  std::vector<std::int64_t> labels;
  std::size_t n_clusters = 0;
};

// Renumbers non-negative labels to 0..k-1 in order of first appearance,
// keeping -1 as is.
Labeling compact_labels(const std::vector<std::int64_t>& raw);

}  // namespace vdc
