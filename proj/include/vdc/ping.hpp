#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "vdc/ceos.hpp"
#include "vdc/dataset.hpp"
#include "vdc/dnp.hpp"
#include "vdc/kernel_features.hpp"
#include "vdc/knn_graph.hpp"
#include "vdc/labeling.hpp"
#include "vdc/louvain.hpp"

namespace vdc {

enum class Backend { exact, ceos };
enum class Propagator { lpa, louvain, dnp };

std::string_view to_string(Backend b);
std::string_view to_string(Propagator p);
Backend parse_backend(std::string_view name);
Propagator parse_propagator(std::string_view name);

struct PingConfig {
  std::size_t k = 10;
  Backend backend = Backend::exact;
  Propagator propagator = Propagator::dnp;
  GraphKind graph = GraphKind::symmetric;
  CeosParams ceos;
  // Used when the CEOs backend runs on l2/l1 data; sigma <= 0 selects the
  // mean pairwise distance of a sample.
  KernelFeatureConfig kernel{Metric::l2, 1024, 0.0, 0};
  double dnp_c = 1.0;
  DnpCheckSet dnp_check = DnpCheckSet::knn_only;
  DnpIneligible dnp_ineligible = DnpIneligible::defer;
  std::size_t lpa_iters = 100;
  std::uint64_t seed = 0;
  std::optional<EdgeWeighting> weighting;
  // Keep the top-k list of every node in the result (for recall checks).
  bool keep_knn = false;
};

// Wall time per stage in milliseconds, split as neighbor search, graph
// construction and propagation.
struct StageTimings {
  double find_knn_ms = 0.0;
  double build_graph_ms = 0.0;
  double propagation_ms = 0.0;
};

struct PingResult {
  Labeling labeling;
  StageTimings timings;
  std::size_t short_lists = 0;  // nodes with fewer than k neighbors
  KnnLists knn;                 // filled when keep_knn is set
};

// The unit-norm data the CEOs backend indexes: normalized rows for cosine,
// the kernel feature map otherwise.
Dataset ceos_embedding(const Dataset& ds, const PingConfig& cfg);

// Neighborhood search, weighted kNN graph, then propagation. With the
// CEOs backend DNP runs directly on the approximate neighborhoods; the
// other propagators use the top-k graph derived from them.
// `prebuilt` replaces the index build of the CEOs backend. It must have
// been built over ceos_embedding(ds, cfg).
PingResult ping(const Dataset& ds, const PingConfig& cfg, const CeosIndex* prebuilt = nullptr);

}  // namespace vdc
