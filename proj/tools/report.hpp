#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "vdc/dataset.hpp"
#include "vdc/metrics.hpp"

namespace vdc::cli {

inline constexpr int kReportSchemaVersion = 1;

// Machine-readable record of one command run. Unset sections serialize as
// null so every report carries the same top-level keys.
struct RunReport {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json dataset;     // see fingerprint()
  nlohmann::json timings_ms = nlohmann::json::object();
  nlohmann::json scores;      // see scores_json()
  nlohmann::json clusters;    // cluster count
  nlohmann::json seeds = nlohmann::json::object();
  nlohmann::json extra = nlohmann::json::object();  // command-specific payload

  nlohmann::json to_json() const;
};

nlohmann::json fingerprint(const Dataset& ds);
nlohmann::json scores_json(const ClusteringScores& s);
std::string hex64(std::uint64_t v);

}  // namespace vdc::cli
