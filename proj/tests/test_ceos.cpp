#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "vdc/ceos.hpp"
#include "vdc/error.hpp"
#include "vdc/knn_graph.hpp"
#include "vdc/parallel.hpp"

using namespace vdc;

namespace {

// Dense version of one spinner bank: column j is the projection of e_j.
// Row t of the result, dotted with x, is the t-th projection.
std::vector<std::vector<double>> dense_bank(std::size_t dim, std::uint64_t seed, std::size_t d) {
  const StructuredSpinner sp(dim, seed);
  std::vector<std::vector<double>> rows(dim, std::vector<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> e(d, 0.0);
    e[j] = 1.0;
    const auto col = sp.project(e);
    for (std::size_t t = 0; t < dim; ++t) rows[t][j] = col[t];
  }
  return rows;
}

std::vector<std::pair<double, std::uint32_t>> ranked(const std::vector<std::vector<double>>& bank,
                                                      std::size_t D, std::span<const double> x) {
  std::vector<std::pair<double, std::uint32_t>> out;
  for (std::size_t t = 0; t < D; ++t) {
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) v += bank[t][j] * x[j];
    out.push_back({-v, static_cast<std::uint32_t>(t)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

double recall_at(const NeighborhoodSet& nbrs, const KnnLists& exact, std::size_t k) {
  double hits = 0.0;
  for (std::size_t q = 0; q < exact.size(); ++q) {
    const auto sel = knn_from_neighborhood(nbrs[q], k);
    std::set<std::uint32_t> truth;
    for (std::size_t t = 0; t < k; ++t) truth.insert(exact[q][t].id);
    for (auto id : sel.ids) hits += truth.count(id);
  }
  return hits / static_cast<double>(exact.size() * k);
}

}  // namespace

TEST_CASE("single point fills s^2 buckets of size one") {
  const auto ds = test::clustered_unit_vectors(1, 16, 1, 0.1, 3).data;
  CeosParams p;
  p.D = 32;
  p.s = 4;
  p.m = 3;
  const auto idx = CeosIndex::build(ds, p);
  std::size_t nonempty = 0;
  for (std::size_t i = 0; i < p.D; ++i) {
    for (std::size_t j = 0; j < p.D; ++j) {
      const auto b = idx.bucket(i, j);
      if (b.empty()) continue;
      ++nonempty;
      CHECK(b.size() == 1);
      CHECK(b[0].id == 0);
    }
  }
  CHECK(nonempty == p.s * p.s);
  const auto nbrs = query_all(ds, idx);
  CHECK(nbrs[0].empty());
}

TEST_CASE("m + 1 identical points fill every touched bucket to m") {
  const std::size_t m = 5;
  std::vector<double> vals;
  for (std::size_t i = 0; i <= m; ++i) {
    vals.push_back(0.6);
    vals.push_back(0.8);
  }
  Dataset ds(m + 1, 2, vals, Metric::cosine);
  CeosParams p;
  p.D = 16;
  p.s = 3;
  p.m = m;
  const auto idx = CeosIndex::build(ds, p);
  std::size_t touched = 0;
  for (std::size_t i = 0; i < p.D; ++i) {
    for (std::size_t j = 0; j < p.D; ++j) {
      const auto b = idx.bucket(i, j);
      if (b.empty()) continue;
      ++touched;
      CHECK(b.size() == m);
      // Equal scores: ties resolve to the smaller ids.
      for (std::size_t t = 0; t < m; ++t) CHECK(b[t].id == t);
    }
  }
  CHECK(touched == p.s * p.s);
}

TEST_CASE("parameter and precondition errors") {
  const Dataset raw(2, 2, {3.0, 4.0, 1.0, 0.0}, Metric::cosine);
  CHECK_THROWS_AS(CeosIndex::build(raw, {}), PreconditionError);
  const auto ds = normalize_unit(raw);
  CeosParams p;
  p.D = 8;
  p.s = 9;
  CHECK_THROWS_AS(CeosIndex::build(ds, p), ConfigError);
  p.s = 2;
  p.m = 0;
  CHECK_THROWS_AS(CeosIndex::build(ds, p), ConfigError);
  p.m = 2;
  const auto idx = CeosIndex::build(ds, p);
  const auto other = test::clustered_unit_vectors(3, 2, 1, 0.1, 1).data;
  CHECK_THROWS_AS(query_all(other, idx), ConfigError);
}

TEST_CASE("buckets match a slow dense recomputation") {
  const std::size_t n = 1000, d = 32;
  const auto ds = test::clustered_unit_vectors(n, d, 1, 10.0, 12).data;  // near uniform
  CeosParams p;  // D = 128, s = 20, m = 50
  const auto idx = CeosIndex::build(ds, p);

  const auto bank_r = dense_bank(128, p.seed_r, d);
  const auto bank_s = dense_bank(128, p.seed_s, d);
  std::map<std::size_t, std::vector<std::pair<double, std::uint32_t>>> oracle;
  for (std::size_t q = 0; q < n; ++q) {
    const auto rr = ranked(bank_r, p.D, ds.row(q));
    const auto rs = ranked(bank_s, p.D, ds.row(q));
    for (std::size_t a = 0; a < p.s; ++a) {
      for (std::size_t b = 0; b < p.s; ++b) {
        const double score = -(rr[a].first + rs[b].first);
        oracle[rr[a].second * p.D + rs[b].second].push_back({-score, static_cast<std::uint32_t>(q)});
      }
    }
  }
  std::size_t total = 0;
  std::size_t mismatched = 0;
  std::map<std::size_t, std::size_t> histogram, expected_histogram;
  for (auto& [bucket, members] : oracle) {
    std::sort(members.begin(), members.end());
    if (members.size() > p.m) members.resize(p.m);
    const auto got = idx.bucket(bucket / p.D, bucket % p.D);
    ++expected_histogram[members.size()];
    if (got.size() != members.size()) {
      ++mismatched;
      continue;
    }
    for (std::size_t t = 0; t < got.size(); ++t) {
      // Scores agree to rounding; ids may only differ on numerically tied scores.
      CHECK(std::abs(got[t].score + members[t].first) < 1e-9);
      if (got[t].id != members[t].second) {
        CHECK(std::abs(got[t].score + members[t].first) < 1e-9);
      }
    }
  }
  for (std::size_t i = 0; i < p.D; ++i) {
    for (std::size_t j = 0; j < p.D; ++j) {
      const auto b = idx.bucket(i, j);
      total += b.size();
      if (!b.empty()) ++histogram[b.size()];
      CHECK(b.size() <= p.m);
      for (std::size_t t = 1; t < b.size(); ++t) CHECK(b[t - 1].score >= b[t].score);
    }
  }
  CHECK(mismatched == 0);
  CHECK(histogram == expected_histogram);
  CHECK(total == idx.total_entries());
  CHECK(total <= std::min(n * p.s * p.s, p.D * p.D * p.m));
}

TEST_CASE("untrimmed build holds every point s^2 times") {
  const auto ds = test::clustered_unit_vectors(200, 24, 3, 0.3, 4).data;
  CeosParams p;
  p.D = 64;
  p.s = 6;
  p.m = 2;
  p.trim = false;
  const auto idx = CeosIndex::build(ds, p);
  std::vector<std::size_t> count(ds.n(), 0);
  for (std::size_t i = 0; i < p.D; ++i) {
    for (std::size_t j = 0; j < p.D; ++j) {
      for (const auto& e : idx.bucket(i, j)) ++count[e.id];
    }
  }
  for (auto c : count) CHECK(c == p.s * p.s);
}

TEST_CASE("memory guard produces the same index") {
  const auto ds = test::clustered_unit_vectors(1500, 16, 4, 0.2, 8).data;
  CeosParams p;
  p.D = 32;
  p.s = 5;
  p.m = 10;
  const auto plain = CeosIndex::build(ds, p);
  p.memory_guard = true;
  const auto guarded = CeosIndex::build(ds, p);
  for (std::size_t i = 0; i < p.D; ++i) {
    for (std::size_t j = 0; j < p.D; ++j) {
      const auto a = plain.bucket(i, j);
      const auto b = guarded.bucket(i, j);
      REQUIRE(a.size() == b.size());
      CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
  }
}

TEST_CASE("query buckets are the best composites over all D^2 pairs") {
  const auto ds = test::clustered_unit_vectors(20, 12, 2, 0.5, 6).data;
  CeosParams p;
  p.D = 16;
  p.s = 3;
  const auto idx = CeosIndex::build(ds, p);
  const StructuredSpinner r(16, p.seed_r), s(16, p.seed_s);
  for (std::size_t q = 0; q < ds.n(); ++q) {
    const auto pr = r.project(ds.row(q));
    const auto ps = s.project(ds.row(q));
    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::uint32_t i = 0; i < 16; ++i) {
      for (std::uint32_t j = 0; j < 16; ++j) all.push_back({-(pr[i] + ps[j]), i * 16 + j});
    }
    std::sort(all.begin(), all.end());
    const auto got = idx.query_buckets(ds.row(q));
    REQUIRE(got.size() == p.s);
    for (std::size_t t = 0; t < p.s; ++t) CHECK(got[t] == all[t].second);
  }
}

TEST_CASE("neighborhoods are symmetric, deduplicated and sorted") {
  const auto ds = test::clustered_unit_vectors(800, 16, 4, 0.3, 2).data;
  CeosParams p;
  p.D = 64;
  p.s = 8;
  p.m = 20;
  const auto idx = CeosIndex::build(ds, p);
  const auto nbrs = query_all(ds, idx);
  REQUIRE(nbrs.size() == ds.n());
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::size_t q = 0; q < ds.n(); ++q) {
    std::set<std::uint32_t> ids;
    const auto list = nbrs[q];
    for (std::size_t t = 0; t < list.size(); ++t) {
      CHECK(list[t].id != q);
      CHECK(ids.insert(list[t].id).second);
      if (t > 0) CHECK(list[t - 1].dot >= list[t].dot);
      const double expected = dot(ds.row(q), ds.row(list[t].id));
      CHECK(std::abs(list[t].dot - expected) < 1e-6);
      pairs.insert({static_cast<std::uint32_t>(q), list[t].id});
    }
  }
  for (const auto& [a, b] : pairs) CHECK(pairs.count({b, a}) == 1);

  // Forward candidates: every member of q's query buckets is in N(q).
  for (std::size_t q = 0; q < 50; ++q) {
    std::set<std::uint32_t> ids;
    for (const auto& e : nbrs[q]) ids.insert(e.id);
    for (auto b : idx.query_buckets(ds.row(q))) {
      for (const auto& e : idx.bucket(b / p.D, b % p.D)) {
        if (e.id != q) CHECK(ids.count(e.id) == 1);
      }
    }
  }
}

TEST_CASE("antipodal pair stays symmetric") {
  const Dataset ds(2, 2, {1.0, 0.0, -1.0, 0.0}, Metric::cosine);
  CeosParams p;
  p.D = 4;
  p.s = 1;
  p.m = 1;
  const auto nbrs = query_all(ds, CeosIndex::build(ds, p));
  CHECK(nbrs[0].size() == nbrs[1].size());
  if (!nbrs[0].empty()) {
    CHECK(nbrs[0][0].id == 1);
    CHECK(nbrs[0][0].dot == -1.0f);
  }
}

TEST_CASE("knn_from_neighborhood") {
  const std::vector<NeighborEntry> list{{4, 0.9f}, {2, 0.5f}, {7, 0.1f}};
  const auto sel = knn_from_neighborhood(list, 5);
  CHECK(sel.is_short);
  CHECK(sel.ids == std::vector<std::uint32_t>{4, 2, 7});
  const auto two = knn_from_neighborhood(list, 2);
  CHECK_FALSE(two.is_short);
  CHECK(two.dists[0] == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(two.dists[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("save and load round trip") {
  const auto ds = test::clustered_unit_vectors(300, 10, 3, 0.3, 5).data;
  CeosParams p;
  p.D = 32;
  p.s = 4;
  p.m = 8;
  const auto idx = CeosIndex::build(ds, p);
  const auto path = test::temp_path("index.ceos");
  idx.save(path);
  const auto back = CeosIndex::load(path);
  CHECK(back.n() == idx.n());
  CHECK(back.params().seed_s == p.seed_s);
  for (std::size_t i = 0; i < p.D; ++i) {
    for (std::size_t j = 0; j < p.D; ++j) {
      const auto a = idx.bucket(i, j);
      const auto b = back.bucket(i, j);
      REQUIRE(a.size() == b.size());
      CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
  }
  const auto n1 = query_all(ds, idx);
  const auto n2 = query_all(ds, back);
  CHECK(n1.total_entries() == n2.total_entries());

  {
    std::ofstream out(path, std::ios::binary);
    out << "JUNK";
  }
  CHECK_THROWS_AS(CeosIndex::load(path), FormatError);
}

TEST_CASE("results do not depend on worker count") {
  const auto ds = test::clustered_unit_vectors(2000, 16, 5, 0.3, 9).data;
  CeosParams p;
  p.D = 64;
  p.s = 8;
  p.m = 16;
  set_num_threads(1);
  const auto a = query_all(ds, CeosIndex::build(ds, p));
  set_num_threads(3);
  const auto b = query_all(ds, CeosIndex::build(ds, p));
  set_num_threads(1);
  REQUIRE(a.total_entries() == b.total_entries());
  for (std::size_t q = 0; q < ds.n(); ++q) {
    REQUIRE(a[q].size() == b[q].size());
    CHECK(std::equal(a[q].begin(), a[q].end(), b[q].begin()));
  }
}

TEST_CASE("recall on clustered data" * doctest::timeout(120)) {
  const auto ds = test::clustered_unit_vectors(10000, 32, 5, 0.3, 2024).data;
  const auto exact = exact_knn(ds, 20, Metric::cosine);
  auto recall = [&](std::size_t s, std::size_t m, std::size_t k) {
    CeosParams p;
    p.s = s;
    p.m = m;
    return recall_at(query_all(ds, CeosIndex::build(ds, p)), exact, k);
  };
  const double base = recall(20, 50, 10);
  MESSAGE("recall@10 s=20 m=50: " << base);
  CHECK(base >= 50.0 * 10.0 / 10000.0);
  CHECK(base >= recall(10, 50, 10));
  CHECK(base >= recall(20, 25, 10));

  // Overlap with the exact top-k shrinks as k grows at a fixed budget.
  CeosParams p;
  const auto nbrs = query_all(ds, CeosIndex::build(ds, p));
  double prev = 1.0;
  for (std::size_t k : {1u, 5u, 10u, 20u}) {
    const double r = recall_at(nbrs, exact, k);
    MESSAGE("overlap@" << k << " = " << r);
    CHECK(r <= prev + 1e-12);
    prev = r;
  }
}
