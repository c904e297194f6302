#include "vdc/dnp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "vdc/error.hpp"

namespace vdc {
namespace {

struct LaterFirst {
  bool operator()(const DnpQueueEntry& a, const DnpQueueEntry& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.node != b.node) return a.node > b.node;
    return a.pred > b.pred;
  }
};

// visit_push(node, fn(id, dist)) enumerates the push set of a node;
// any_check(node, fn(id) -> bool) reports whether fn holds for any member
// of the eligibility set.
template <class VisitPush, class AnyCheck>
Labeling run_dnp(std::size_t n, const std::vector<double>& dkp, DnpIneligible rule,
                 VisitPush&& visit_push, AnyCheck&& any_check, const DnpObserver* obs) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> label(n, -1);
  std::vector<double> reach(n, inf);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (dkp[a] != dkp[b]) return dkp[a] < dkp[b];
    return a < b;
  });

  std::priority_queue<DnpQueueEntry, std::vector<DnpQueueEntry>, LaterFirst> queue;
  std::int64_t clusters = 0;

  auto push_neighbors = [&](std::uint32_t from) {
    visit_push(from, [&](std::uint32_t to, double dist) {
      if (label[to] != -1 || !(dist < reach[to])) return;
      if (obs && obs->on_reach_update) obs->on_reach_update(to, reach[to], dist);
      reach[to] = dist;
      queue.push({dist + dkp[to], to, from});
    });
  };

  for (std::uint32_t seed : order) {
    if (label[seed] != -1) continue;
    label[seed] = clusters++;
    if (obs && obs->on_seed) obs->on_seed(seed, dkp[seed]);
    push_neighbors(seed);
    while (!queue.empty()) {
      const DnpQueueEntry top = queue.top();
      queue.pop();
      if (label[top.node] != -1) {
        if (obs && obs->on_stale_pop) obs->on_stale_pop(top);
        continue;
      }
      const std::int64_t pred_label = label[top.pred];
      const bool eligible =
          any_check(top.node, [&](std::uint32_t id) { return label[id] == pred_label; });
      if (!eligible && rule == DnpIneligible::defer) {
        // Left unlabeled. reachDist keeps its value, so only a strictly
        // closer labeled neighbor can queue it again before the seed loop
        // gets to it.
        if (obs && obs->on_defer) obs->on_defer(top);
        continue;
      }
      label[top.node] = eligible ? pred_label : clusters++;
      if (obs && obs->on_pop_label) obs->on_pop_label(top.node, top.pred, !eligible);
      push_neighbors(top.node);
    }
  }
  Labeling out;
  out.labels = std::move(label);
  out.n_clusters = static_cast<std::size_t>(clusters);
  return out;
}

std::size_t check_length(const DnpParams& p, std::size_t stored) {
  return p.check == DnpCheckSet::knn_only ? std::min(p.k, stored) : stored;
}

}  // namespace

std::size_t DnpParams::kprime() const {
  // Small slack so that c = k / k' reproduces k' exactly.
  const auto kp = static_cast<std::size_t>(std::floor(static_cast<double>(k) / c + 1e-9));
  return std::max<std::size_t>(1, kp);
}

void DnpParams::validate() const {
  if (k == 0) throw ConfigError("DNP k must be at least 1");
  if (!(c >= 1.0)) throw ConfigError("DNP c must be at least 1");
}

Labeling dnp(const KnnLists& lists, const DnpParams& params, const DnpObserver* observer) {
  params.validate();
  const std::size_t n = lists.size();
  const std::size_t kp = params.kprime();
  std::vector<double> dkp(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto& l = lists[q];
    dkp[q] = l.empty() ? std::numeric_limits<double>::infinity() : l[std::min(kp, l.size()) - 1].dist;
  }
  return run_dnp(
      n, dkp, params.ineligible,
      [&](std::uint32_t q, auto&& fn) {
        for (const auto& nb : lists[q]) fn(nb.id, nb.dist);
      },
      [&](std::uint32_t q, auto&& pred) {
        const auto& l = lists[q];
        const std::size_t len = check_length(params, l.size());
        for (std::size_t t = 0; t < len; ++t) {
          if (pred(l[t].id)) return true;
        }
        return false;
      },
      observer);
}

Labeling dnp(const NeighborhoodSet& nbrs, const DnpParams& params, const DnpObserver* observer) {
  params.validate();
  const std::size_t n = nbrs.size();
  const std::size_t kp = params.kprime();
  std::vector<double> dkp(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto l = nbrs[q];
    dkp[q] = l.empty() ? std::numeric_limits<double>::infinity()
                       : 1.0 - static_cast<double>(l[std::min(kp, l.size()) - 1].dot);
  }
  return run_dnp(
      n, dkp, params.ineligible,
      [&](std::uint32_t q, auto&& fn) {
        for (const auto& e : nbrs[q]) fn(e.id, 1.0 - static_cast<double>(e.dot));
      },
      [&](std::uint32_t q, auto&& pred) {
        const auto l = nbrs[q];
        const std::size_t len = check_length(params, l.size());
        for (std::size_t t = 0; t < len; ++t) {
          if (pred(l[t].id)) return true;
        }
        return false;
      },
      observer);
}

Labeling dnp(const KnnGraph& g, const DnpParams& params, const DnpObserver* observer) {
  params.validate();
  const std::size_t kp = params.kprime();
  std::vector<double> dkp(g.n);
  for (std::size_t q = 0; q < g.n; ++q) dkp[q] = g.kth_distance(q, kp);
  return run_dnp(
      g.n, dkp, params.ineligible,
      [&](std::uint32_t q, auto&& fn) {
        for (const auto& nb : g.adjacency[q]) fn(nb.id, nb.dist);
      },
      [&](std::uint32_t q, auto&& pred) {
        const auto& l = g.knn[q];
        const std::size_t len = check_length(params, l.size());
        for (std::size_t t = 0; t < len; ++t) {
          if (pred(l[t].id)) return true;
        }
        return false;
      },
      observer);
}

}  // namespace vdc
