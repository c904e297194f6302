#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vdc {

enum class Metric { cosine, l2, l1 };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

// Dense row-major point matrix. The metric stays unset until the caller
// configures it; normalize_unit and kernel_map set it to cosine.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t n, std::size_t d, std::vector<double> values,
          std::optional<Metric> metric = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  bool empty() const { return n_ == 0; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * d_, d_}; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * d_, d_}; }
  const std::vector<double>& values() const { return values_; }

  std::optional<Metric> metric() const { return metric_; }
  void set_metric(Metric m) { metric_ = m; }

  // True when every row was scaled to unit Euclidean norm.
  bool normalized() const { return normalized_; }
  void mark_normalized(bool v) { normalized_ = v; }

  // 64-bit FNV-1a over n, d and the raw value bytes.
  std::uint64_t content_hash() const;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> values_;
  std::optional<Metric> metric_;
  bool normalized_ = false;
};

struct GroundTruth {
  std::vector<std::int64_t> labels;
};

// Divides each row by its Euclidean norm; throws PreconditionError naming
// the first zero-norm row.
Dataset normalize_unit(const Dataset& ds);

// Checks every row norm is within tol of 1.
bool rows_unit_norm(const Dataset& ds, double tol = 1e-6);

double dot(std::span<const double> a, std::span<const double> b);
double distance(Metric m, std::span<const double> a, std::span<const double> b);

}  // namespace vdc
