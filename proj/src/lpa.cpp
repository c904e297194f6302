#include "vdc/lpa.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "vdc/error.hpp"

namespace vdc {

std::int64_t lpa_vote(const KnnGraph& g, std::span<const std::int64_t> labels, std::size_t node) {
  const auto& adj = g.adjacency[node];
  if (adj.empty()) return labels[node];
  std::unordered_map<std::int64_t, std::size_t> votes;
  votes.reserve(adj.size());
  for (const auto& nb : adj) ++votes[labels[nb.id]];
  std::int64_t best = -1;
  std::size_t best_count = 0;
  for (const auto& [label, count] : votes) {
    if (count > best_count || (count == best_count && label < best)) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

Labeling lpa(const KnnGraph& g, std::size_t max_iters, std::uint64_t seed) {
  if (max_iters == 0) throw ConfigError("LPA needs at least one iteration");
  std::vector<std::int64_t> labels(g.n);
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<std::uint32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(seed);
  for (std::size_t it = 0; it < max_iters; ++it) {
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;
    for (auto u : order) {
      const auto next = lpa_vote(g, labels, u);
      if (next != labels[u]) {
        labels[u] = next;
        changed = true;
      }
    }
    if (!changed) break;
  }
  // Order-preserving renumbering, so the smallest-label tie rule still
  // holds on the returned labels and a fixpoint stays a fixpoint.
  std::vector<std::int64_t> distinct(labels);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Labeling out;
  out.labels.reserve(labels.size());
  for (auto l : labels) {
    out.labels.push_back(std::lower_bound(distinct.begin(), distinct.end(), l) - distinct.begin());
  }
  out.n_clusters = distinct.size();
  return out;
}

}  // namespace vdc
