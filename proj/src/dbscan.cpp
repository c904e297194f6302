#include "vdc/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "vdc/error.hpp"
#include "vdc/parallel.hpp"

namespace vdc {

void DbscanParams::validate() const {
  if (!(eps > 0.0)) throw ConfigError("DBSCAN eps must be positive");
  if (min_pts == 0) throw ConfigError("DBSCAN minPts must be at least 1");
}

DbscanResult dbscan_subset(const Dataset& ds, std::span<const std::uint32_t> active,
                           const DbscanParams& params, Metric metric) {
  params.validate();
  const std::size_t n = active.size();
  // Neighbor lists in local indices, ascending, self included.
  std::vector<std::vector<std::uint32_t>> nbrs(n);
  parallel_for(n, [&](std::size_t a) {
    const auto ra = ds.row(active[a]);
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || distance(metric, ra, ds.row(active[b])) <= params.eps) {
        nbrs[a].push_back(static_cast<std::uint32_t>(b));
      }
    }
  });

  DbscanResult out;
  out.core.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) out.core[a] = nbrs[a].size() >= params.min_pts;

  std::vector<std::int64_t> label(n, -1);
  std::int64_t clusters = 0;
  std::vector<std::uint32_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (!out.core[s] || label[s] >= 0) continue;
    label[s] = clusters;
    stack.push_back(static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto v : nbrs[u]) {
        if (out.core[v] && label[v] < 0) {
          label[v] = clusters;
          stack.push_back(v);
        }
      }
    }
    ++clusters;
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (out.core[a]) continue;
    for (auto v : nbrs[a]) {
      if (out.core[v]) {
        label[a] = label[v];
        break;
      }
    }
  }
  out.labeling.labels = std::move(label);
  out.labeling.n_clusters = static_cast<std::size_t>(clusters);
  return out;
}

DbscanResult dbscan(const Dataset& ds, const DbscanParams& params, Metric metric) {
  std::vector<std::uint32_t> all(ds.n());
  std::iota(all.begin(), all.end(), 0u);
  return dbscan_subset(ds, all, params, metric);
}

double unit_ball_volume(std::size_t d) {
  const double half = static_cast<double>(d) / 2.0;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

double eps_from_density(double k, double n, std::size_t d, double f) {
  if (!(k > 0.0) || !(n > 0.0) || d == 0 || !(f > 0.0)) {
    throw ConfigError("eps_from_density needs positive k, n, d and f");
  }
  const double log_ratio = std::log(k) - std::log(n) - std::log(unit_ball_volume(d)) - std::log(f);
  return std::exp(log_ratio / static_cast<double>(d));
}

DbscanStarConfig DbscanStarConfig::from_densities(std::size_t k, std::size_t n, std::size_t d,
                                                  std::span<const double> densities) {
  DbscanStarConfig cfg;
  cfg.k = k;
  for (double f : densities) {
    cfg.eps_list.push_back(eps_from_density(static_cast<double>(k), static_cast<double>(n), d, f));
  }
  std::sort(cfg.eps_list.begin(), cfg.eps_list.end());
  cfg.validate();
  return cfg;
}

void DbscanStarConfig::validate() const {
  if (eps_list.empty()) throw ConfigError("DBSCAN* needs at least one radius");
  if (k == 0) throw ConfigError("DBSCAN* k must be at least 1");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("DBSCAN* radii must be positive");
    if (i > 0 && !(eps_list[i] > eps_list[i - 1])) {
      throw ConfigError("DBSCAN* radii must be strictly increasing");
    }
  }
}

DbscanStarResult dbscan_star(const Dataset& ds, const DbscanStarConfig& cfg, Metric metric) {
  cfg.validate();
  const std::size_t n = ds.n();
  std::vector<std::int64_t> label(n, -1);
  std::vector<std::int64_t> level(n, -1);
  std::vector<std::uint32_t> active(n);
  std::iota(active.begin(), active.end(), 0u);
  std::int64_t offset = 0;

  for (std::size_t li = 0; li < cfg.eps_list.size() && !active.empty(); ++li) {
    const auto run = dbscan_subset(ds, active, DbscanParams{cfg.eps_list[li], cfg.k}, metric);
    std::vector<std::uint32_t> next;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const auto id = active[a];
      const auto l = run.labeling.labels[a];
      if (run.core[a]) {
        label[id] = offset + l;
        level[id] = static_cast<std::int64_t>(li);
      } else {
        if (l >= 0 && label[id] < 0) label[id] = offset + l;
        next.push_back(id);
      }
    }
    offset += static_cast<std::int64_t>(run.labeling.n_clusters);
    active = std::move(next);
  }
  DbscanStarResult out;
  // Every allocated id keeps at least its core points, so ids are contiguous.
  out.labeling.labels = std::move(label);
  out.labeling.n_clusters = static_cast<std::size_t>(offset);
  out.level = std::move(level);
  return out;
}

KnnDensityEstimate knn_density(const KnnGraph& g, std::size_t dim) {
  if (dim == 0) throw ConfigError("density estimate needs d >= 1");
  KnnDensityEstimate est;
  est.values.resize(g.n);
  const double log_base = std::log(static_cast<double>(g.k)) - std::log(static_cast<double>(g.n)) -
                          std::log(unit_ball_volume(dim));
  for (std::size_t q = 0; q < g.n; ++q) {
    const double dk = g.dk[q];
    est.values[q] = dk > 0.0 ? std::exp(log_base - static_cast<double>(dim) * std::log(dk))
                             : std::numeric_limits<double>::infinity();
  }
  return est;
}

}  // namespace vdc
