#include "vdc/labeling.hpp"

#include <unordered_map>

namespace vdc {

Labeling compact_labels(const std::vector<std::int64_t>& raw) {
  Labeling out;
  out.labels.resize(raw.size());
  std::unordered_map<std::int64_t, std::int64_t> remap;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) {
      out.labels[i] = -1;
      continue;
    }
    auto [it, inserted] = remap.try_emplace(raw[i], static_cast<std::int64_t>(remap.size()));
    out.labels[i] = it->second;
  }
  out.n_clusters = remap.size();
  return out;
}

}  // namespace vdc
