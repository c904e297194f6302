#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace vdc {

// Neighbor with a distance (smaller is closer).
struct Neighbor {
  std::uint32_t id;
  double dist;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Per-point neighbor lists sorted ascending by (dist, id).
using KnnLists = std::vector<std::vector<Neighbor>>;

// Neighbor with an inner product (larger is closer).
struct NeighborEntry {
  std::uint32_t id;
  float dot;

  friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

// Approximate neighborhoods N(q) for every point, stored contiguously.
// Each list is deduplicated, excludes its owner and is sorted by
// descending dot product (ties by ascending id).
class NeighborhoodSet {
 public:
  NeighborhoodSet() = default;
  NeighborhoodSet(std::vector<std::size_t> offsets, std::vector<NeighborEntry> entries);
  // Adopts a buffer whose first offsets.back() entries hold the lists.
  NeighborhoodSet(std::vector<std::size_t> offsets, std::shared_ptr<const NeighborEntry[]> entries)
      : offsets_(std::move(offsets)), entries_(std::move(entries)) {}

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const NeighborEntry> operator[](std::size_t q) const {
    return {entries_.get() + offsets_[q], offsets_[q + 1] - offsets_[q]};
  }
  std::size_t total_entries() const { return offsets_.empty() ? 0 : offsets_.back(); }

 private:
  std::vector<std::size_t> offsets_;
  // Shared and immutable, so copies are cheap.
  std::shared_ptr<const NeighborEntry[]> entries_;
};

}  // namespace vdc
