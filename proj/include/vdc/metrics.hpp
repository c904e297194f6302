#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace vdc {

// How predicted noise (-1) is scored.
enum class NoisePolicy {
  own_cluster,  // all noise points form one extra predicted cluster
  exclude,      // noise points are dropped from both partitions
};

NoisePolicy parse_noise_policy(std::string_view name);

struct ContingencyCell {
  std::size_t row;
  std::size_t col;
  std::int64_t count;
};

// Sparse r x c co-occurrence table; rows are predicted clusters, columns
// are ground-truth classes, both numbered by first appearance.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<ContingencyCell> cells;  // non-zero only, sorted by (row, col)
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;

  std::vector<std::vector<std::int64_t>> dense() const;
  // True when the two partitions are equal up to relabeling.
  bool identical_partitions() const;
};

ContingencyTable contingency(std::span<const std::int64_t> pred, std::span<const std::int64_t> truth,
                             NoisePolicy policy = NoisePolicy::own_cluster);

// Builds a table from a dense matrix (tests and hand examples).
ContingencyTable table_from_dense(const std::vector<std::vector<std::int64_t>>& counts);

double entropy_rows(const ContingencyTable& t);
double entropy_cols(const ContingencyTable& t);
double mutual_information(const ContingencyTable& t);
// Expected mutual information under the hypergeometric model with the
// table's marginals fixed.
double expected_mutual_information(const ContingencyTable& t);

enum class AmiNormalizer { arithmetic, max };

double nmi(const ContingencyTable& t);
double ami(const ContingencyTable& t, AmiNormalizer norm = AmiNormalizer::arithmetic);
double ari(const ContingencyTable& t);

struct ClusteringScores {
  double ami = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  std::size_t clusters_pred = 0;  // distinct non-negative predicted labels
  std::size_t clusters_true = 0;
  std::size_t noise = 0;          // predicted -1 count
};

ClusteringScores evaluate(std::span<const std::int64_t> pred, std::span<const std::int64_t> truth,
                          NoisePolicy policy = NoisePolicy::own_cluster);

}  // namespace vdc
