#include "report.hpp"

#include <cstdio>

namespace vdc::cli {

nlohmann::json RunReport::to_json() const {
  nlohmann::json j = {
      {"schema_version", kReportSchemaVersion},
      {"command", command},
      {"parameters", parameters},
      {"dataset", dataset},
      {"timings_ms", timings_ms},
      {"scores", scores},
      {"clusters", clusters},
      {"seeds", seeds},
  };
  for (const auto& [key, value] : extra.items()) j[key] = value;
  return j;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

nlohmann::json fingerprint(const Dataset& ds) {
  return {{"n", ds.n()},
          {"d", ds.d()},
          {"metric", ds.metric() ? std::string(to_string(*ds.metric())) : std::string("unset")},
          {"hash", hex64(ds.content_hash())}};
}

nlohmann::json scores_json(const ClusteringScores& s) {
  return {{"ami", s.ami},
          {"nmi", s.nmi},
          {"ari", s.ari},
          {"clusters_pred", s.clusters_pred},
          {"clusters_true", s.clusters_true},
          {"noise", s.noise}};
}

}  // namespace vdc::cli
