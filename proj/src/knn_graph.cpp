#include "vdc/knn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "vdc/error.hpp"
#include "vdc/parallel.hpp"

namespace vdc {
namespace {

bool closer(const Neighbor& a, const Neighbor& b) {
  if (a.dist != b.dist) return a.dist < b.dist;
  return a.id < b.id;
}

}  // namespace

std::string_view to_string(GraphKind kind) {
  return kind == GraphKind::mutual ? "mutual" : "symmetric";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "mutual") return GraphKind::mutual;
  if (name == "symmetric") return GraphKind::symmetric;
  throw ConfigError("unknown graph kind '" + std::string(name) + "'");
}

KnnLists exact_knn(const Dataset& ds, std::size_t k, Metric metric) {
  const std::size_t n = ds.n();
  if (k == 0) throw ConfigError("k must be at least 1");
  if (k >= n) {
    throw ConfigError("k = " + std::to_string(k) + " must be smaller than n = " + std::to_string(n));
  }
  std::vector<double> inv_norm;
  if (metric == Metric::cosine) {
    inv_norm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double nn = std::sqrt(dot(ds.row(i), ds.row(i)));
      inv_norm[i] = nn > 0.0 ? 1.0 / nn : 0.0;
    }
  }
  KnnLists lists(n);
  parallel_chunks(n, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<Neighbor> heap;
    heap.reserve(k + 1);
    for (std::size_t q = lo; q < hi; ++q) {
      heap.clear();
      const auto qrow = ds.row(q);
      for (std::size_t x = 0; x < n; ++x) {
        if (x == q) continue;
        double dist;
        if (metric == Metric::cosine) {
          dist = (inv_norm[q] == 0.0 || inv_norm[x] == 0.0)
                     ? 1.0
                     : std::max(0.0, 1.0 - dot(qrow, ds.row(x)) * inv_norm[q] * inv_norm[x]);
        } else {
          dist = distance(metric, qrow, ds.row(x));
        }
        const Neighbor cand{static_cast<std::uint32_t>(x), dist};
        if (heap.size() < k) {
          heap.push_back(cand);
          std::push_heap(heap.begin(), heap.end(), closer);
        } else if (closer(cand, heap.front())) {
          std::pop_heap(heap.begin(), heap.end(), closer);
          heap.back() = cand;
          std::push_heap(heap.begin(), heap.end(), closer);
        }
      }
      std::sort_heap(heap.begin(), heap.end(), closer);
      lists[q] = heap;
    }
  });
  return lists;
}

std::size_t KnnGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& a : adjacency) total += a.size();
  return total / 2;
}

double KnnGraph::kth_distance(std::size_t node, std::size_t j) const {
  const auto& list = knn[node];
  if (list.empty()) return std::numeric_limits<double>::infinity();
  return list[std::min(j, list.size()) - 1].dist;
}

KnnGraph build_graph(const KnnLists& lists, GraphKind kind, std::size_t k) {
  if (k == 0) throw ConfigError("k must be at least 1");
  KnnGraph g;
  g.n = lists.size();
  g.k = k;
  g.kind = kind;
  g.knn.resize(g.n);
  g.dk.assign(g.n, std::numeric_limits<double>::infinity());
  g.is_short.assign(g.n, 0);

  // Sorted id sets for membership tests.
  std::vector<std::vector<std::uint32_t>> member(g.n);
  for (std::size_t u = 0; u < g.n; ++u) {
    const auto& src = lists[u];
    const std::size_t take = std::min(k, src.size());
    g.knn[u].assign(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(take));
    auto& ids = member[u];
    ids.reserve(take);
    for (const auto& nb : g.knn[u]) {
      if (nb.id >= g.n) throw ConfigError("neighbor id " + std::to_string(nb.id) + " out of range");
      if (nb.id == u) throw ConfigError("self entry in list of node " + std::to_string(u));
      if (!(nb.dist >= 0.0)) throw ConfigError("negative or NaN distance in list of node " + std::to_string(u));
      ids.push_back(nb.id);
    }
    if (!std::is_sorted(g.knn[u].begin(), g.knn[u].end(), closer)) {
      throw ConfigError("list of node " + std::to_string(u) + " is not sorted by distance");
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw ConfigError("duplicate neighbor id in list of node " + std::to_string(u));
    }
    g.is_short[u] = take < k;
    if (take > 0) g.dk[u] = g.knn[u][take - 1].dist;
  }

  auto contains = [&](std::size_t u, std::uint32_t v) {
    return std::binary_search(member[u].begin(), member[u].end(), v);
  };

  g.adjacency.assign(g.n, {});
  for (std::size_t u = 0; u < g.n; ++u) {
    for (const auto& nb : g.knn[u]) {
      const std::size_t v = nb.id;
      const bool back = contains(v, static_cast<std::uint32_t>(u));
      if (kind == GraphKind::mutual && !back) continue;
      // Each undirected edge is emitted once, from its smaller endpoint when
      // both lists hold it.
      if (back && v < u) continue;
      double w = nb.dist;
      if (back) {
        for (const auto& vb : g.knn[v]) {
          if (vb.id == u) {
            w = std::min(w, vb.dist);
            break;
          }
        }
      }
      g.adjacency[u].push_back({static_cast<std::uint32_t>(v), w});
      g.adjacency[v].push_back({static_cast<std::uint32_t>(u), w});
    }
  }
  parallel_for(g.n, [&](std::size_t u) { std::sort(g.adjacency[u].begin(), g.adjacency[u].end(), closer); });
  return g;
}

std::vector<std::int64_t> connected_components(const KnnGraph& g,
                                               std::optional<std::span<const std::uint8_t>> mask) {
  if (mask && mask->size() != g.n) throw ConfigError("component mask length does not match graph");
  auto inside = [&](std::size_t u) { return !mask || (*mask)[u] != 0; };
  std::vector<std::int64_t> comp(g.n, -1);
  std::int64_t next = 0;
  std::vector<std::uint32_t> stack;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (!inside(s) || comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.adjacency[u]) {
        if (inside(nb.id) && comp[nb.id] < 0) {
          comp[nb.id] = next;
          stack.push_back(nb.id);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::size_t component_count(std::span<const std::int64_t> components) {
  std::int64_t top = -1;
  for (auto c : components) top = std::max(top, c);
  return static_cast<std::size_t>(top + 1);
}

void write_graph(std::ostream& out, const KnnGraph& g) {
  out << g.n << ' ' << g.k << ' ' << to_string(g.kind) << '\n';
  out.precision(9);
  for (std::size_t u = 0; u < g.n; ++u) {
    for (const auto& nb : g.adjacency[u]) {
      if (u < nb.id) out << u << ' ' << nb.id << ' ' << nb.dist << '\n';
    }
  }
}

}  // namespace vdc
