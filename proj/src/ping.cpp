#include "vdc/ping.hpp"

#include <chrono>
#include <string>

#include "vdc/error.hpp"
#include "vdc/lpa.hpp"

namespace vdc {
namespace {

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Labeling propagate(const KnnGraph& g, const PingConfig& cfg, Metric metric) {
  switch (cfg.propagator) {
    case Propagator::lpa: return lpa(g, cfg.lpa_iters, cfg.seed);
    case Propagator::louvain:
      return louvain(g, cfg.weighting.value_or(default_weighting(metric)), cfg.seed).labeling;
    case Propagator::dnp: return dnp(g, DnpParams{cfg.k, cfg.dnp_c, cfg.dnp_check, cfg.dnp_ineligible});
  }
  throw ConfigError("unknown propagator");
}

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::exact ? "exact" : "ceos"; }

std::string_view to_string(Propagator p) {
  switch (p) {
    case Propagator::lpa: return "lpa";
    case Propagator::louvain: return "louvain";
    case Propagator::dnp: return "dnp";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "exact") return Backend::exact;
  if (name == "ceos") return Backend::ceos;
  throw ConfigError("unknown backend '" + std::string(name) + "'");
}

Propagator parse_propagator(std::string_view name) {
  if (name == "lpa") return Propagator::lpa;
  if (name == "louvain") return Propagator::louvain;
  if (name == "dnp") return Propagator::dnp;
  throw ConfigError("unknown propagator '" + std::string(name) + "'");
}

Dataset ceos_embedding(const Dataset& ds, const PingConfig& cfg) {
  if (!ds.metric()) throw ConfigError("dataset metric is not set");
  const Metric metric = *ds.metric();
  if (metric == Metric::cosine) return normalize_unit(ds);
  KernelFeatureConfig kc = cfg.kernel;
  kc.target_metric = metric;
  if (kc.sigma <= 0.0) kc.sigma = default_sigma(ds, metric, 1000, cfg.seed);
  return kernel_map(ds, kc);
}

PingResult ping(const Dataset& ds, const PingConfig& cfg, const CeosIndex* prebuilt) {
  if (cfg.k == 0) throw ConfigError("k must be at least 1");
  if (!ds.metric()) throw ConfigError("dataset metric is not set");
  PingResult result;
  if (ds.n() == 1) {
    result.labeling.labels = {0};
    result.labeling.n_clusters = 1;
    return result;
  }
  const Metric metric = *ds.metric();
  Stopwatch clock;

  if (cfg.backend == Backend::exact) {
    KnnLists lists = exact_knn(ds, cfg.k, metric);
    result.timings.find_knn_ms = clock.lap_ms();
    const KnnGraph g = build_graph(lists, cfg.graph, cfg.k);
    result.timings.build_graph_ms = clock.lap_ms();
    if (cfg.keep_knn) result.knn = std::move(lists);
    result.labeling = propagate(g, cfg, metric);
    result.timings.propagation_ms = clock.lap_ms();
    return result;
  }

  const Dataset unit = ceos_embedding(ds, cfg);
  std::optional<CeosIndex> built;
  if (prebuilt) {
    if (prebuilt->n() != unit.n() || prebuilt->d() != unit.d()) {
      throw ConfigError("index was built for " + std::to_string(prebuilt->n()) + " x " +
                        std::to_string(prebuilt->d()) + " data, embedding is " +
                        std::to_string(unit.n()) + " x " + std::to_string(unit.d()));
    }
  } else {
    built.emplace(CeosIndex::build(unit, cfg.ceos));
  }
  const NeighborhoodSet nbrs = query_all(unit, prebuilt ? *prebuilt : *built);
  result.timings.find_knn_ms = clock.lap_ms();
  for (std::size_t q = 0; q < nbrs.size(); ++q) result.short_lists += nbrs[q].size() < cfg.k;
  if (cfg.keep_knn) result.knn = knn_lists_from_neighborhoods(nbrs, cfg.k);

  if (cfg.propagator == Propagator::dnp) {
    result.labeling = dnp(nbrs, DnpParams{cfg.k, cfg.dnp_c, cfg.dnp_check, cfg.dnp_ineligible});
    result.timings.propagation_ms = clock.lap_ms();
    return result;
  }
  const KnnGraph g = build_graph(knn_lists_from_neighborhoods(nbrs, cfg.k), cfg.graph, cfg.k);
  result.timings.build_graph_ms = clock.lap_ms();
  // Distances are cosine on the embedded data whatever the input metric.
  result.labeling = propagate(g, cfg, Metric::cosine);
  result.timings.propagation_ms = clock.lap_ms();
  return result;
}

}  // namespace vdc
