#include "vdc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "vdc/error.hpp"

namespace vdc {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::cosine: return "cosine";
    case Metric::l2: return "l2";
    case Metric::l1: return "l1";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "cosine") return Metric::cosine;
  if (name == "l2") return Metric::l2;
  if (name == "l1") return Metric::l1;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values,
                 std::optional<Metric> metric)
    : n_(n), d_(d), values_(std::move(values)), metric_(metric) {
  if (n_ == 0 || d_ == 0) throw ConfigError("dataset needs n >= 1 and d >= 1");
  if (values_.size() != n_ * d_) throw DimensionError("dataset value count does not match n*d");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw FormatError("non-finite value at row " + std::to_string(i / d_) + ", column " +
                        std::to_string(i % d_));
    }
  }
}

std::uint64_t Dataset::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t dims[2] = {n_, d_};
  mix(dims, sizeof(dims));
  mix(values_.data(), values_.size() * sizeof(double));
  return h;
}

Dataset normalize_unit(const Dataset& ds) {
  std::vector<double> out(ds.values());
  const std::size_t d = ds.d();
  for (std::size_t i = 0; i < ds.n(); ++i) {
    double* r = out.data() + i * d;
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) sq += r[j] * r[j];
    if (sq == 0.0) throw PreconditionError("zero-norm row " + std::to_string(i));
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t j = 0; j < d; ++j) r[j] *= inv;
  }
  Dataset result(ds.n(), d, std::move(out), Metric::cosine);
  result.mark_normalized(true);
  return result;
}

bool rows_unit_norm(const Dataset& ds, double tol) {
  for (std::size_t i = 0; i < ds.n(); ++i) {
    auto r = ds.row(i);
    if (std::abs(std::sqrt(dot(r, r)) - 1.0) > tol) return false;
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double distance(Metric m, std::span<const double> a, std::span<const double> b) {
  switch (m) {
    case Metric::l2: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
      }
      return std::sqrt(s);
    }
    case Metric::l1: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
      return s;
    }
    case Metric::cosine: {
      double ab = 0.0, aa = 0.0, bb = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
      }
      if (aa == 0.0 || bb == 0.0) return 1.0;
      return std::max(0.0, 1.0 - ab / std::sqrt(aa * bb));
    }
  }
  return 0.0;
}

}  // namespace vdc
