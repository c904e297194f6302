#include "vdc/louvain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "vdc/error.hpp"

namespace vdc {
namespace {

constexpr double kMinGain = 1e-12;
constexpr std::size_t kMaxSweeps = 1000;

// One round of local moving. Returns true if any node changed community.
bool local_moving(const WeightedGraph& g, std::vector<std::uint32_t>& comm, std::mt19937_64& rng) {
  const std::size_t n = g.size();
  const double m2 = g.total_weight();
  std::vector<double> degree(n), tot(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    degree[u] = g.degree(u);
    tot[comm[u]] += degree[u];
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<double> link(n, 0.0);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> touched;
  bool moved_any = false;
  bool moved = true;
  for (std::size_t sweep = 0; moved && sweep < kMaxSweeps; ++sweep) {
    moved = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto u : order) {
      const std::uint32_t own = comm[u];
      touched.clear();
      touched.push_back(own);
      seen[own] = 1;
      for (const auto& [v, w] : g.adj[u]) {
        if (v == u) continue;
        const auto c = comm[v];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[own] -= degree[u];
      std::uint32_t best = own;
      double best_gain = link[own] - tot[own] * degree[u] / m2;
      for (auto c : touched) {
        const double gain = link[c] - tot[c] * degree[u] / m2;
        if (gain > best_gain + kMinGain) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += degree[u];
      if (best != own) {
        comm[u] = best;
        moved = true;
        moved_any = true;
      }
      for (auto c : touched) {
        link[c] = 0.0;
        seen[c] = 0;
      }
    }
  }
  return moved_any;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::uint32_t>& comm,
                        std::size_t n_comm) {
  WeightedGraph out;
  out.adj.resize(n_comm);
  std::vector<std::unordered_map<std::uint32_t, double>> acc(n_comm);
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (const auto& [v, w] : g.adj[u]) acc[comm[u]][comm[v]] += w;
  }
  for (std::size_t c = 0; c < n_comm; ++c) {
    out.adj[c].assign(acc[c].begin(), acc[c].end());
    std::sort(out.adj[c].begin(), out.adj[c].end());
  }
  return out;
}

// Renumbers communities to 0..k-1 by first appearance.
std::size_t renumber(std::vector<std::uint32_t>& comm) {
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  for (auto& c : comm) {
    auto [it, inserted] = remap.try_emplace(c, static_cast<std::uint32_t>(remap.size()));
    c = it->second;
  }
  return remap.size();
}

}  // namespace

EdgeWeighting default_weighting(Metric metric) {
  return metric == Metric::cosine ? EdgeWeighting::cosine_similarity : EdgeWeighting::exp_decay;
}

double WeightedGraph::degree(std::size_t u) const {
  double s = 0.0;
  for (const auto& [v, w] : adj[u]) s += w;
  return s;
}

double WeightedGraph::total_weight() const {
  double s = 0.0;
  for (std::size_t u = 0; u < adj.size(); ++u) s += degree(u);
  return s;
}

WeightedGraph similarity_graph(const KnnGraph& g, EdgeWeighting weighting) {
  double mean = 0.0;
  std::size_t count = 0;
  for (const auto& a : g.adjacency) {
    for (const auto& nb : a) {
      mean += nb.dist;
      ++count;
    }
  }
  mean = count ? mean / static_cast<double>(count) : 1.0;
  if (mean <= 0.0) mean = 1.0;

  WeightedGraph out;
  out.adj.resize(g.n);
  for (std::size_t u = 0; u < g.n; ++u) {
    out.adj[u].reserve(g.adjacency[u].size());
    for (const auto& nb : g.adjacency[u]) {
      const double w = weighting == EdgeWeighting::cosine_similarity ? std::max(0.0, 1.0 - nb.dist)
                                                                      : std::exp(-nb.dist / mean);
      if (!(w >= 0.0)) throw Error("negative edge similarity after conversion");
      out.adj[u].push_back({nb.id, w});
    }
  }
  return out;
}

double modularity(const WeightedGraph& g, std::span<const std::int64_t> community) {
  const double m2 = g.total_weight();
  if (m2 <= 0.0) return 0.0;
  std::unordered_map<std::int64_t, double> in, tot;
  for (std::size_t u = 0; u < g.size(); ++u) {
    tot[community[u]] += g.degree(u);
    for (const auto& [v, w] : g.adj[u]) {
      if (community[v] == community[u]) in[community[u]] += w;
    }
  }
  double q = 0.0;
  for (const auto& [c, t] : tot) {
    const double a = t / m2;
    q += in[c] / m2 - a * a;
  }
  return q;
}

LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed) {
  const std::size_t n = g.size();
  LouvainResult result;
  std::vector<std::int64_t> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0);
  if (n == 0 || g.total_weight() <= 0.0) {
    result.labeling = compact_labels(assignment);
    return result;
  }

  std::mt19937_64 rng(seed);
  WeightedGraph level = g;
  double previous = modularity(g, assignment);
  while (true) {
    std::vector<std::uint32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0u);
    if (!local_moving(level, comm, rng)) break;
    const std::size_t n_comm = renumber(comm);
    for (auto& a : assignment) a = comm[static_cast<std::size_t>(a)];
    const double q = modularity(g, assignment);
    if (q < previous - 1e-9) throw Error("Louvain modularity decreased between levels");
    result.level_modularity.push_back(q);
    if (n_comm == level.size() || q - previous <= kMinGain) break;
    previous = q;
    level = aggregate(level, comm, n_comm);
  }
  result.labeling = compact_labels(assignment);
  return result;
}

LouvainResult louvain(const KnnGraph& g, EdgeWeighting weighting, std::uint64_t seed) {
  return louvain(similarity_graph(g, weighting), seed);
}

}  // namespace vdc
