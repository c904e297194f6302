#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vdc/dataset.hpp"
#include "vdc/hadamard.hpp"
#include "vdc/neighbors.hpp"

namespace vdc {

struct CeosParams {
  std::size_t D = 128;  // projections per bank
  std::size_t s = 20;   // extreme directions kept per bank
  std::size_t m = 50;   // bucket capacity
  std::uint64_t seed_r = 1;
  std::uint64_t seed_s = 2;
  // Caps each bucket at 4m during insertion, evicting the worst scores.
  // Produces the same index as the default path with less peak memory.
  bool memory_guard = false;
  // Skips the final top-m truncation. Only meant for inspecting raw
  // bucket multiplicities.
  bool trim = true;

  void validate() const;
};

struct BucketEntry {
  std::uint32_t id;
  double score;  // x.r_i + x.s_j

  friend bool operator==(const BucketEntry&, const BucketEntry&) = default;
};

// Top-s extreme directions of one point in each bank, sorted by
// descending projection value (ties by smaller direction id).
struct ExtremeDirections {
  std::vector<std::uint32_t> r_ids;
  std::vector<double> r_vals;
  std::vector<std::uint32_t> s_ids;
  std::vector<double> s_vals;
};

// Index over D x D composite directions z_ij = r_i + s_j. Bucket (i, j)
// holds the points whose top-s directions include r_i and s_j, keeping
// the m highest scores. Immutable after build.
class CeosIndex {
 public:
  static CeosIndex build(const Dataset& ds, const CeosParams& params);

  const CeosParams& params() const { return params_; }
  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  std::size_t bucket_count() const { return params_.D * params_.D; }

  std::span<const BucketEntry> bucket(std::size_t i, std::size_t j) const;
  std::size_t total_entries() const { return entries_.size(); }

  ExtremeDirections extreme_directions(std::span<const double> x) const;
  // The s composite buckets (i * D + j) scoring highest for x, in
  // descending score order, ties by smaller bucket id.
  std::vector<std::uint32_t> query_buckets(std::span<const double> x) const;

  void save(const std::filesystem::path& path) const;
  static CeosIndex load(const std::filesystem::path& path);

 private:
  CeosIndex(const CeosParams& params, std::size_t n, std::size_t d);

  CeosParams params_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  StructuredSpinner bank_r_;
  StructuredSpinner bank_s_;
  std::vector<std::size_t> offsets_;  // bucket_count() + 1
  std::vector<BucketEntry> entries_;
};

// Approximate neighborhoods for every indexed point. Each bucket member x
// found for q contributes x to N(q) and q to N(x).
NeighborhoodSet query_all(const Dataset& ds, const CeosIndex& index);

struct KnnSelection {
  std::vector<std::uint32_t> ids;
  std::vector<double> dists;  // cosine distance 1 - dot
  bool is_short = false;      // fewer than k entries were available
};

KnnSelection knn_from_neighborhood(std::span<const NeighborEntry> list, std::size_t k);

// Top-k of every neighborhood as distance lists.
KnnLists knn_lists_from_neighborhoods(const NeighborhoodSet& nbrs, std::size_t k);

}  // namespace vdc
