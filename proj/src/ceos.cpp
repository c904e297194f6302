#include "vdc/ceos.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <memory>
#include <numeric>
#include <string>

#include "vdc/error.hpp"
#include "vdc/parallel.hpp"

namespace vdc {
namespace {

constexpr char kMagic[4] = {'C', 'E', 'O', 'S'};
constexpr std::uint32_t kVersion = 1;

std::size_t spinner_dim(std::size_t D, std::size_t d) {
  return std::max(next_power_of_two(D), next_power_of_two(d));
}

bool better(const BucketEntry& a, const BucketEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

// Indices of the s largest values among the first `count`, descending,
// ties by smaller index.
void top_s(std::span<const double> values, std::size_t count, std::size_t s,
           std::vector<std::uint32_t>& ids, std::vector<double>& vals) {
  ids.resize(count);
  std::iota(ids.begin(), ids.end(), 0u);
  auto cmp = [&](std::uint32_t a, std::uint32_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(s), ids.end(), cmp);
  ids.resize(s);
  vals.resize(s);
  for (std::size_t t = 0; t < s; ++t) vals[t] = values[ids[t]];
}

template <class T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("truncated index file");
  return v;
}

}  // namespace

void CeosParams::validate() const {
  if (D == 0) throw ConfigError("CEOs D must be at least 1");
  if (s == 0 || s > D) throw ConfigError("CEOs s must satisfy 1 <= s <= D");
  if (m == 0) throw ConfigError("CEOs m must be at least 1");
  if (D > 65535) throw ConfigError("CEOs D must be below 65536");
}

CeosIndex::CeosIndex(const CeosParams& params, std::size_t n, std::size_t d)
    : params_(params),
      n_(n),
      d_(d),
      bank_r_(spinner_dim(params.D, d), params.seed_r),
      bank_s_(spinner_dim(params.D, d), params.seed_s) {}

ExtremeDirections CeosIndex::extreme_directions(std::span<const double> x) const {
  if (x.size() != d_) throw DimensionError("point dimension does not match the index");
  std::vector<double> proj(bank_r_.dim());
  ExtremeDirections dirs;
  bank_r_.project_into(x, proj);
  top_s(proj, params_.D, params_.s, dirs.r_ids, dirs.r_vals);
  bank_s_.project_into(x, proj);
  top_s(proj, params_.D, params_.s, dirs.s_ids, dirs.s_vals);
  return dirs;
}

std::vector<std::uint32_t> CeosIndex::query_buckets(std::span<const double> x) const {
  const auto dirs = extreme_directions(x);
  const std::size_t s = params_.s;
  std::vector<BucketEntry> composites;
  composites.reserve(s * s);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      const auto bucket = static_cast<std::uint32_t>(dirs.r_ids[a] * params_.D + dirs.s_ids[b]);
      composites.push_back({bucket, dirs.r_vals[a] + dirs.s_vals[b]});
    }
  }
  // Any of the s best composites over all D^2 pairs uses a top-s vector from
  // each bank, so selecting among these s^2 is exact.
  std::partial_sort(composites.begin(), composites.begin() + static_cast<std::ptrdiff_t>(s),
                    composites.end(), better);
  std::vector<std::uint32_t> out(s);
  for (std::size_t t = 0; t < s; ++t) out[t] = composites[t].id;
  return out;
}

std::span<const BucketEntry> CeosIndex::bucket(std::size_t i, std::size_t j) const {
  const std::size_t b = i * params_.D + j;
  return {entries_.data() + offsets_[b], offsets_[b + 1] - offsets_[b]};
}

CeosIndex CeosIndex::build(const Dataset& ds, const CeosParams& params) {
  params.validate();
  if (ds.n() > 0xFFFFFFFFull) throw ConfigError("CEOs supports at most 2^32 - 1 points");
  if (!rows_unit_norm(ds, 1e-6)) {
    throw PreconditionError("CEOs requires rows normalized to the unit sphere");
  }
  CeosIndex index(params, ds.n(), ds.d());
  const std::size_t n = ds.n();
  const std::size_t s = params.s;
  const std::size_t D = params.D;
  const std::size_t buckets = D * D;

  // Extreme directions per point; the (i, j) buckets and scores follow.
  std::vector<std::uint32_t> r_ids(n * s), s_ids(n * s);
  std::vector<double> r_vals(n * s), s_vals(n * s);
  parallel_for(n, [&](std::size_t q) {
    const auto dirs = index.extreme_directions(ds.row(q));
    std::copy(dirs.r_ids.begin(), dirs.r_ids.end(), r_ids.begin() + q * s);
    std::copy(dirs.r_vals.begin(), dirs.r_vals.end(), r_vals.begin() + q * s);
    std::copy(dirs.s_ids.begin(), dirs.s_ids.end(), s_ids.begin() + q * s);
    std::copy(dirs.s_vals.begin(), dirs.s_vals.end(), s_vals.begin() + q * s);
  });

  auto for_each_insertion = [&](auto&& fn) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) {
          fn(r_ids[q * s + a] * D + s_ids[q * s + b],
             BucketEntry{static_cast<std::uint32_t>(q), r_vals[q * s + a] + s_vals[q * s + b]});
        }
      }
    }
  };

  const std::size_t m = params.m;
  std::vector<std::size_t> sizes(buckets, 0);
  std::vector<BucketEntry> raw;
  std::vector<std::size_t> raw_offsets(buckets + 1, 0);

  if (params.memory_guard && params.trim) {
    std::vector<std::vector<BucketEntry>> capped(buckets);
    const std::size_t cap = 4 * m;
    for_each_insertion([&](std::size_t b, const BucketEntry& e) {
      auto& bucket = capped[b];
      bucket.push_back(e);
      if (bucket.size() >= cap) {
        std::nth_element(bucket.begin(), bucket.begin() + static_cast<std::ptrdiff_t>(m - 1),
                         bucket.end(), better);
        bucket.resize(m);
      }
    });
    for (std::size_t b = 0; b < buckets; ++b) raw_offsets[b + 1] = raw_offsets[b] + capped[b].size();
    raw.reserve(raw_offsets[buckets]);
    for (auto& bucket : capped) {
      raw.insert(raw.end(), bucket.begin(), bucket.end());
      std::vector<BucketEntry>().swap(bucket);
    }
  } else {
    for_each_insertion([&](std::size_t b, const BucketEntry&) { ++raw_offsets[b + 1]; });
    for (std::size_t b = 0; b < buckets; ++b) raw_offsets[b + 1] += raw_offsets[b];
    raw.resize(raw_offsets[buckets]);
    std::vector<std::size_t> cursor(raw_offsets.begin(), raw_offsets.end() - 1);
    for_each_insertion([&](std::size_t b, const BucketEntry& e) { raw[cursor[b]++] = e; });
  }
  std::vector<std::uint32_t>().swap(r_ids);
  std::vector<std::uint32_t>().swap(s_ids);

  parallel_for(buckets, [&](std::size_t b) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(raw_offsets[b]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(raw_offsets[b + 1]);
    const std::size_t len = static_cast<std::size_t>(last - first);
    const std::size_t keep = params.trim ? std::min(len, m) : len;
    std::partial_sort(first, first + static_cast<std::ptrdiff_t>(keep), last, better);
    sizes[b] = keep;
  });

  index.offsets_.assign(buckets + 1, 0);
  for (std::size_t b = 0; b < buckets; ++b) index.offsets_[b + 1] = index.offsets_[b] + sizes[b];
  index.entries_.resize(index.offsets_[buckets]);
  for (std::size_t b = 0; b < buckets; ++b) {
    std::copy_n(raw.begin() + static_cast<std::ptrdiff_t>(raw_offsets[b]), sizes[b],
                index.entries_.begin() + static_cast<std::ptrdiff_t>(index.offsets_[b]));
  }
  return index;
}

namespace {

// Uninitialized on purpose; callers write every slot they later read.
std::shared_ptr<NeighborEntry[]> allocate_entries(std::size_t count) {
  return std::shared_ptr<NeighborEntry[]>(new NeighborEntry[std::max<std::size_t>(1, count)]);
}

}  // namespace

NeighborhoodSet::NeighborhoodSet(std::vector<std::size_t> offsets, std::vector<NeighborEntry> entries)
    : offsets_(std::move(offsets)) {
  auto buf = allocate_entries(entries.size());
  std::copy(entries.begin(), entries.end(), buf.get());
  entries_ = std::move(buf);
}

NeighborhoodSet query_all(const Dataset& ds, const CeosIndex& index) {
  if (ds.n() != index.n() || ds.d() != index.d()) {
    throw ConfigError("dataset shape " + std::to_string(ds.n()) + "x" + std::to_string(ds.d()) +
                      " does not match index " + std::to_string(index.n()) + "x" +
                      std::to_string(index.d()));
  }
  const std::size_t n = ds.n();
  const std::size_t D = index.params().D;
  if (n == 0) return NeighborhoodSet(std::vector<std::size_t>{0}, std::vector<NeighborEntry>{});

  const std::size_t workers = num_threads();
  const std::size_t s = index.params().s;
  std::vector<std::vector<std::uint32_t>> stamps(workers);

  // Query buckets are computed once and reused by both passes.
  std::vector<std::uint32_t> buckets(n * s);
  parallel_for(n, [&](std::size_t q) {
    const auto b = index.query_buckets(ds.row(q));
    std::copy(b.begin(), b.end(), buckets.begin() + static_cast<std::ptrdiff_t>(q * s));
  });

  // Calls fn(x) once for every distinct bucket member x != q.
  auto for_each_candidate = [&](std::size_t worker, std::size_t q, auto&& fn) {
    auto& stamp = stamps[worker];
    if (stamp.size() != n) stamp.assign(n, 0);
    const auto tag = static_cast<std::uint32_t>(q + 1);
    stamp[q] = tag;
    for (std::size_t t = 0; t < s; ++t) {
      const std::uint32_t b = buckets[q * s + t];
      for (const auto& e : index.bucket(b / D, b % D)) {
        if (stamp[e.id] == tag) continue;
        stamp[e.id] = tag;
        fn(e.id);
      }
    }
  };

  // Pass 1: forward counts and reverse in-degrees.
  std::vector<std::size_t> forward(n, 0);
  auto reverse = std::make_unique<std::atomic<std::uint32_t>[]>(n);
  for (std::size_t i = 0; i < n; ++i) reverse[i].store(0, std::memory_order_relaxed);
  parallel_chunks(n, [&](std::size_t w, std::size_t lo, std::size_t hi) {
    for (std::size_t q = lo; q < hi; ++q) {
      for_each_candidate(w, q, [&](std::uint32_t x) {
        ++forward[q];
        reverse[x].fetch_add(1, std::memory_order_relaxed);
      });
    }
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t q = 0; q < n; ++q) {
    offsets[q + 1] = offsets[q] + forward[q] + reverse[q].load(std::memory_order_relaxed);
  }
  // Left uninitialized: every slot is written exactly once below.
  std::shared_ptr<NeighborEntry[]> entries = allocate_entries(offsets[n]);
  auto cursor = std::make_unique<std::atomic<std::size_t>[]>(n);
  for (std::size_t q = 0; q < n; ++q) {
    cursor[q].store(offsets[q] + forward[q], std::memory_order_relaxed);
  }

  // Pass 2: fill. Forward entries go straight into q's own slots. Reverse
  // entries are buffered per block of queries, radix-sorted by target and
  // written as one contiguous run per target, which keeps the scatter
  // cache friendly. Runs are claimed atomically; their order is irrelevant
  // because every list is sorted afterwards.
  struct Reverse {
    std::uint32_t target;
    NeighborEntry entry;
  };
  constexpr std::size_t kBlock = 4096;
  const int key_bits = std::max(1, static_cast<int>(std::bit_width(n - 1)));
  const int low_bits = key_bits / 2;
  for (auto& st : stamps) std::fill(st.begin(), st.end(), 0);
  parallel_chunks(n, [&](std::size_t w, std::size_t lo, std::size_t hi) {
    std::vector<Reverse> buf, tmp;
    std::vector<std::size_t> count;
    auto radix_pass = [&](std::vector<Reverse>& from, std::vector<Reverse>& to, int shift, int bits) {
      const std::uint32_t mask = (1u << bits) - 1;
      count.assign((std::size_t{1} << bits) + 1, 0);
      for (const auto& r : from) ++count[((r.target >> shift) & mask) + 1];
      std::partial_sum(count.begin(), count.end(), count.begin());
      to.resize(from.size());
      for (const auto& r : from) to[count[(r.target >> shift) & mask]++] = r;
    };
    for (std::size_t b0 = lo; b0 < hi; b0 += kBlock) {
      const std::size_t b1 = std::min(hi, b0 + kBlock);
      buf.clear();
      for (std::size_t q = b0; q < b1; ++q) {
        std::size_t slot = offsets[q];
        const auto qrow = ds.row(q);
        for_each_candidate(w, q, [&](std::uint32_t x) {
          const auto d = static_cast<float>(dot(qrow, ds.row(x)));
          entries[slot++] = {x, d};
          buf.push_back({x, {static_cast<std::uint32_t>(q), d}});
        });
      }
      radix_pass(buf, tmp, 0, low_bits);
      radix_pass(tmp, buf, low_bits, key_bits - low_bits);
      for (std::size_t i = 0; i < buf.size();) {
        std::size_t j = i;
        while (j < buf.size() && buf[j].target == buf[i].target) ++j;
        std::size_t at = cursor[buf[i].target].fetch_add(j - i, std::memory_order_relaxed);
        for (; i < j; ++i) entries[at++] = buf[i].entry;
      }
    }
  });

  // Dedupe in place keeping the larger dot, then one sort per list.
  std::vector<std::vector<std::uint32_t>> where(workers);
  for (auto& st : stamps) std::fill(st.begin(), st.end(), 0);
  std::vector<std::size_t> kept(n, 0);
  parallel_chunks(n, [&](std::size_t w, std::size_t lo, std::size_t hi) {
    auto& stamp = stamps[w];
    auto& pos = where[w];
    if (stamp.size() != n) stamp.assign(n, 0);
    pos.resize(n);
    for (std::size_t q = lo; q < hi; ++q) {
      const auto tag = static_cast<std::uint32_t>(q + 1);
      NeighborEntry* list = entries.get() + offsets[q];
      const std::size_t len = offsets[q + 1] - offsets[q];
      std::size_t out = 0;
      for (std::size_t t = 0; t < len; ++t) {
        const NeighborEntry e = list[t];
        if (stamp[e.id] != tag) {
          stamp[e.id] = tag;
          pos[e.id] = static_cast<std::uint32_t>(out);
          list[out++] = e;
        } else if (e.dot > list[pos[e.id]].dot) {
          list[pos[e.id]].dot = e.dot;
        }
      }
      std::sort(list, list + out, [](const NeighborEntry& a, const NeighborEntry& b) {
        if (a.dot != b.dot) return a.dot > b.dot;
        return a.id < b.id;
      });
      kept[q] = out;
    }
  });

  std::vector<std::size_t> compact(n + 1, 0);
  for (std::size_t q = 0; q < n; ++q) {
    compact[q + 1] = compact[q] + kept[q];
    std::copy_n(entries.get() + offsets[q], kept[q], entries.get() + compact[q]);
  }
  // The unused tail of the buffer is not returned to the allocator.
  return NeighborhoodSet(std::move(compact), std::move(entries));
}

KnnSelection knn_from_neighborhood(std::span<const NeighborEntry> list, std::size_t k) {
  KnnSelection out;
  const std::size_t take = std::min(k, list.size());
  out.ids.reserve(take);
  out.dists.reserve(take);
  for (std::size_t t = 0; t < take; ++t) {
    out.ids.push_back(list[t].id);
    out.dists.push_back(1.0 - static_cast<double>(list[t].dot));
  }
  out.is_short = list.size() < k;
  return out;
}

KnnLists knn_lists_from_neighborhoods(const NeighborhoodSet& nbrs, std::size_t k) {
  KnnLists lists(nbrs.size());
  parallel_for(nbrs.size(), [&](std::size_t q) {
    const auto sel = knn_from_neighborhood(nbrs[q], k);
    auto& out = lists[q];
    out.reserve(sel.ids.size());
    for (std::size_t t = 0; t < sel.ids.size(); ++t) out.push_back({sel.ids[t], sel.dists[t]});
  });
  return lists;
}

void CeosIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint64_t>(n_));
  write_pod(out, static_cast<std::uint64_t>(d_));
  write_pod(out, static_cast<std::uint32_t>(params_.D));
  write_pod(out, static_cast<std::uint32_t>(params_.s));
  write_pod(out, static_cast<std::uint32_t>(params_.m));
  write_pod(out, params_.seed_r);
  write_pod(out, params_.seed_s);
  std::uint64_t records = 0;
  for (std::size_t b = 0; b < bucket_count(); ++b) records += offsets_[b + 1] > offsets_[b];
  write_pod(out, records);
  for (std::size_t b = 0; b < bucket_count(); ++b) {
    const std::size_t count = offsets_[b + 1] - offsets_[b];
    if (count == 0) continue;
    write_pod(out, static_cast<std::uint32_t>(b / params_.D));
    write_pod(out, static_cast<std::uint32_t>(b % params_.D));
    write_pod(out, static_cast<std::uint32_t>(count));
    for (std::size_t t = offsets_[b]; t < offsets_[b + 1]; ++t) {
      write_pod(out, entries_[t].id);
      write_pod(out, entries_[t].score);
    }
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

CeosIndex CeosIndex::load(const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "index I/O assumes little-endian");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a CEOS index file");
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kVersion) throw FormatError("unsupported index version " + std::to_string(version));
  CeosParams p;
  const auto n = read_pod<std::uint64_t>(in);
  const auto d = read_pod<std::uint64_t>(in);
  p.D = read_pod<std::uint32_t>(in);
  p.s = read_pod<std::uint32_t>(in);
  p.m = read_pod<std::uint32_t>(in);
  p.seed_r = read_pod<std::uint64_t>(in);
  p.seed_s = read_pod<std::uint64_t>(in);
  p.validate();
  if (d == 0) throw FormatError("index header has d = 0");
  const auto records = read_pod<std::uint64_t>(in);

  CeosIndex index(p, n, d);
  const std::size_t buckets = index.bucket_count();
  std::vector<std::vector<BucketEntry>> table(buckets);
  for (std::uint64_t r = 0; r < records; ++r) {
    const auto i = read_pod<std::uint32_t>(in);
    const auto j = read_pod<std::uint32_t>(in);
    const auto count = read_pod<std::uint32_t>(in);
    if (i >= p.D || j >= p.D) throw FormatError("bucket coordinates out of range");
    auto& bucket = table[i * p.D + j];
    if (!bucket.empty()) throw FormatError("duplicate bucket record");
    bucket.resize(count);
    for (auto& e : bucket) {
      e.id = read_pod<std::uint32_t>(in);
      e.score = read_pod<double>(in);
      if (e.id >= n) throw FormatError("bucket entry id out of range");
    }
  }
  index.offsets_.assign(buckets + 1, 0);
  for (std::size_t b = 0; b < buckets; ++b) index.offsets_[b + 1] = index.offsets_[b] + table[b].size();
  index.entries_.reserve(index.offsets_[buckets]);
  for (auto& bucket : table) index.entries_.insert(index.entries_.end(), bucket.begin(), bucket.end());
  return index;
}

}  // namespace vdc
