#include "vdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "vdc/error.hpp"

namespace vdc {
namespace {

double entropy_of(const std::vector<std::int64_t>& sums, std::int64_t total) {
  if (total <= 0) return 0.0;
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto a : sums) {
    if (a > 0) {
      const double p = static_cast<double>(a) / n;
      h -= p * std::log(p);
    }
  }
  return h;
}

double choose2(std::int64_t v) { return 0.5 * static_cast<double>(v) * static_cast<double>(v - 1); }

// Value -> multiplicity of the non-zero marginals.
std::map<std::int64_t, std::int64_t> histogram(const std::vector<std::int64_t>& sums) {
  std::map<std::int64_t, std::int64_t> h;
  for (auto v : sums) {
    if (v > 0) ++h[v];
  }
  return h;
}

}  // namespace

NoisePolicy parse_noise_policy(std::string_view name) {
  if (name == "own-cluster") return NoisePolicy::own_cluster;
  if (name == "exclude") return NoisePolicy::exclude;
  throw ConfigError("unknown noise policy '" + std::string(name) + "'");
}

std::vector<std::vector<std::int64_t>> ContingencyTable::dense() const {
  std::vector<std::vector<std::int64_t>> out(rows, std::vector<std::int64_t>(cols, 0));
  for (const auto& c : cells) out[c.row][c.col] = c.count;
  return out;
}

bool ContingencyTable::identical_partitions() const {
  return cells.size() == rows && cells.size() == cols;
}

ContingencyTable contingency(std::span<const std::int64_t> pred, std::span<const std::int64_t> truth,
                             NoisePolicy policy) {
  if (pred.size() != truth.size()) {
    throw ConfigError("label length mismatch: " + std::to_string(pred.size()) + " predicted vs " +
                      std::to_string(truth.size()) + " ground truth");
  }
  ContingencyTable t;
  std::unordered_map<std::int64_t, std::size_t> row_id, col_id;
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> counts;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] < 0) throw ConfigError("ground-truth labels must be non-negative");
    std::int64_t p = pred[i];
    if (p < 0) {
      if (policy == NoisePolicy::exclude) continue;
      p = -1;
    }
    const auto r = row_id.try_emplace(p, row_id.size()).first->second;
    const auto c = col_id.try_emplace(truth[i], col_id.size()).first->second;
    ++counts[{r, c}];
  }
  t.rows = row_id.size();
  t.cols = col_id.size();
  t.row_sums.assign(t.rows, 0);
  t.col_sums.assign(t.cols, 0);
  for (const auto& [rc, count] : counts) {
    t.cells.push_back({rc.first, rc.second, count});
    t.row_sums[rc.first] += count;
    t.col_sums[rc.second] += count;
    t.total += count;
  }
  return t;
}

ContingencyTable table_from_dense(const std::vector<std::vector<std::int64_t>>& counts) {
  ContingencyTable t;
  t.rows = counts.size();
  t.cols = counts.empty() ? 0 : counts.front().size();
  t.row_sums.assign(t.rows, 0);
  t.col_sums.assign(t.cols, 0);
  for (std::size_t r = 0; r < t.rows; ++r) {
    if (counts[r].size() != t.cols) throw ConfigError("ragged contingency matrix");
    for (std::size_t c = 0; c < t.cols; ++c) {
      const auto v = counts[r][c];
      if (v < 0) throw ConfigError("negative contingency count");
      if (v == 0) continue;
      t.cells.push_back({r, c, v});
      t.row_sums[r] += v;
      t.col_sums[c] += v;
      t.total += v;
    }
  }
  return t;
}

double entropy_rows(const ContingencyTable& t) { return entropy_of(t.row_sums, t.total); }
double entropy_cols(const ContingencyTable& t) { return entropy_of(t.col_sums, t.total); }

double mutual_information(const ContingencyTable& t) {
  if (t.total <= 0) return 0.0;
  const double n = static_cast<double>(t.total);
  double mi = 0.0;
  for (const auto& c : t.cells) {
    const double nij = static_cast<double>(c.count);
    mi += nij / n *
          std::log(n * nij / (static_cast<double>(t.row_sums[c.row]) *
                              static_cast<double>(t.col_sums[c.col])));
  }
  return std::max(0.0, mi);
}

double expected_mutual_information(const ContingencyTable& t) {
  const std::int64_t N = t.total;
  if (N <= 1) return 0.0;
  // log(x!) for x = 0..N.
  std::vector<double> lf(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::int64_t x = 2; x <= N; ++x) lf[x] = lf[x - 1] + std::log(static_cast<double>(x));
  const double n = static_cast<double>(N);
  const double log_n = std::log(n);

  // The expectation only depends on marginal values, so equal marginals are
  // evaluated once and weighted by their multiplicity.
  const auto rows = histogram(t.row_sums);
  const auto cols = histogram(t.col_sums);
  double emi = 0.0;
  for (const auto& [a, ma] : rows) {
    for (const auto& [b, mb] : cols) {
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - N);
      const std::int64_t hi = std::min(a, b);
      const double fixed = lf[a] + lf[b] + lf[N - a] + lf[N - b] - lf[N];
      const double log_ab = std::log(static_cast<double>(a)) + std::log(static_cast<double>(b));
      double sum = 0.0;
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double x = static_cast<double>(nij);
        const double log_p = fixed - lf[nij] - lf[a - nij] - lf[b - nij] - lf[N - a - b + nij];
        sum += x / n * (log_n + std::log(x) - log_ab) * std::exp(log_p);
      }
      emi += sum * static_cast<double>(ma) * static_cast<double>(mb);
    }
  }
  return emi;
}

double nmi(const ContingencyTable& t) {
  const double hr = entropy_rows(t);
  const double hc = entropy_cols(t);
  const double denom = 0.5 * (hr + hc);
  if (denom <= 0.0) return (t.rows == 1 && t.cols == 1) ? 1.0 : 0.0;
  return std::clamp(mutual_information(t) / denom, 0.0, 1.0);
}

double ami(const ContingencyTable& t, AmiNormalizer norm) {
  if (t.total > 0 && t.identical_partitions()) return 1.0;
  const double hr = entropy_rows(t);
  const double hc = entropy_cols(t);
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double normalizer = norm == AmiNormalizer::arithmetic ? 0.5 * (hr + hc) : std::max(hr, hc);
  const double denom = normalizer - emi;
  if (std::abs(denom) < 1e-15) return 0.0;
  return (mi - emi) / denom;
}

double ari(const ContingencyTable& t) {
  if (t.total <= 1) return t.identical_partitions() ? 1.0 : 0.0;
  double index = 0.0;
  for (const auto& c : t.cells) index += choose2(c.count);
  double sum_a = 0.0, sum_b = 0.0;
  for (auto a : t.row_sums) sum_a += choose2(a);
  for (auto b : t.col_sums) sum_b += choose2(b);
  const double expected = sum_a * sum_b / choose2(t.total);
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return t.identical_partitions() ? 1.0 : 0.0;
  return (index - expected) / denom;
}

ClusteringScores evaluate(std::span<const std::int64_t> pred, std::span<const std::int64_t> truth,
                          NoisePolicy policy) {
  const auto t = contingency(pred, truth, policy);
  ClusteringScores s;
  s.ami = ami(t);
  s.nmi = nmi(t);
  s.ari = ari(t);
  std::unordered_map<std::int64_t, int> p, q;
  for (auto v : pred) {
    if (v >= 0) p[v];
    else ++s.noise;
  }
  for (auto v : truth) q[v];
  s.clusters_pred = p.size();
  s.clusters_true = q.size();
  return s;
}

}  // namespace vdc
