// vdc: index, cluster, evaluate and benchmark from the command line.
// Reports go to stdout as JSON, diagnostics to stderr. Exit status is 0 on
// success, 1 on a runtime failure and 2 on a usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "report.hpp"
#include "sweep.hpp"
#include "vdc/ceos.hpp"
#include "vdc/dbscan.hpp"
#include "vdc/error.hpp"
#include "vdc/io.hpp"
#include "vdc/knn_graph.hpp"
#include "vdc/metrics.hpp"
#include "vdc/parallel.hpp"
#include "vdc/ping.hpp"

namespace {

using nlohmann::json;
using namespace vdc;
using vdc::cli::RunReport;

// Bad flag values or combinations found after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const RunReport& report) { std::cout << report.to_json().dump(2) << "\n"; }

struct InputOptions {
  std::string path;
  std::string format = "auto";
  std::string metric = "cosine";
  bool header = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", path, "Data file (fvecs or CSV)")->required();
    cmd->add_option("--format", format, "File format; auto picks by extension")
        ->check(CLI::IsMember({"auto", "fvecs", "csv"}));
    cmd->add_option("--metric", metric, "Distance the clustering should respect")
        ->check(CLI::IsMember({"cosine", "l2", "l1"}));
    cmd->add_flag("--header", header, "CSV input starts with a header line");
  }

  // Cosine data is normalized right away; every consumer expects unit rows.
  Dataset load() const {
    std::string fmt = format;
    if (fmt == "auto") fmt = path.ends_with(".fvecs") ? "fvecs" : "csv";
    Dataset ds = fmt == "fvecs" ? load_fvecs(path) : load_csv(path, header);
    const Metric m = parse_metric(metric);
    if (m == Metric::cosine) ds = normalize_unit(ds);
    ds.set_metric(m);
    return ds;
  }
};

struct IndexOptions {
  CeosParams ceos;
  double sigma = 0.0;
  std::size_t dprime = 1024;
  std::uint64_t seed = 0;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* dprime_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--D", ceos.D, "Random projections per bank")->check(CLI::PositiveNumber);
    cmd->add_option("--s", ceos.s, "Extreme directions kept per bank")->check(CLI::PositiveNumber);
    cmd->add_option("--m", ceos.m, "Bucket capacity")->check(CLI::PositiveNumber);
    cmd->add_flag("--memory-guard", ceos.memory_guard, "Bound bucket size while inserting");
    sigma_opt = cmd->add_option("--sigma", sigma, "Kernel bandwidth for l2/l1 (default: mean distance)")
                    ->check(CLI::PositiveNumber);
    dprime_opt = cmd->add_option("--dprime", dprime, "Random features; output dimension is twice this")
                     ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Base seed for projections, features and propagation");
  }

  void check(Metric metric) const {
    if (metric == Metric::cosine && (*sigma_opt || *dprime_opt)) {
      throw UsageError("--sigma and --dprime only apply to --metric l2 or l1");
    }
  }

  // Seed 0 reproduces the library defaults.
  void apply(PingConfig& cfg) const {
    cfg.seed = seed;
    cfg.ceos = ceos;
    cfg.ceos.seed_r = 2 * seed + 1;
    cfg.ceos.seed_s = 2 * seed + 2;
    cfg.kernel.d_prime = dprime;
    cfg.kernel.sigma = sigma;
    cfg.kernel.seed = seed;
  }

  json seeds() const {
    return {{"base", seed}, {"ceos_r", 2 * seed + 1}, {"ceos_s", 2 * seed + 2}, {"kernel", seed}};
  }
};

json ceos_json(const CeosParams& p) { return {{"D", p.D}, {"s", p.s}, {"m", p.m}}; }

json bucket_stats(const CeosIndex& index) {
  std::size_t nonempty = 0, largest = 0;
  const std::size_t D = index.params().D;
  for (std::size_t i = 0; i < D; ++i) {
    for (std::size_t j = 0; j < D; ++j) {
      const auto size = index.bucket(i, j).size();
      nonempty += size > 0;
      largest = std::max(largest, size);
    }
  }
  return {{"buckets", index.bucket_count()},
          {"nonempty_buckets", nonempty},
          {"total_entries", index.total_entries()},
          {"mean_nonempty_size",
           nonempty ? static_cast<double>(index.total_entries()) / static_cast<double>(nonempty) : 0.0},
          {"max_bucket_size", largest}};
}

std::optional<ClusteringScores> maybe_score(const std::string& truth_path,
                                            const std::vector<std::int64_t>& labels,
                                            const std::string& noise) {
  if (truth_path.empty()) return std::nullopt;
  const auto truth = load_labels(truth_path).labels;
  if (truth.size() != labels.size()) {
    throw Error("truth has " + std::to_string(truth.size()) + " labels for " +
                std::to_string(labels.size()) + " points");
  }
  return evaluate(labels, truth, parse_noise_policy(noise));
}

// Fraction of exact top-k neighbors present among the approximate top-k.
double recall_at(const KnnLists& approx, const KnnLists& exact, std::size_t k) {
  double hits = 0.0;
  for (std::size_t q = 0; q < exact.size(); ++q) {
    std::set<std::uint32_t> truth;
    for (std::size_t t = 0; t < k && t < exact[q].size(); ++t) truth.insert(exact[q][t].id);
    for (std::size_t t = 0; t < k && t < approx[q].size(); ++t) hits += truth.count(approx[q][t].id);
  }
  return hits / static_cast<double>(exact.size() * k);
}

// ---- index ---------------------------------------------------------------

struct IndexCommand {
  InputOptions input;
  IndexOptions opts;
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("index", "Build and save a CEOs index");
    input.attach(cmd);
    opts.attach(cmd);
    cmd->add_option("--out", out, "Index file to write")->required();
  }

  int run() {
    const auto t0 = std::chrono::steady_clock::now();
    const Dataset ds = input.load();
    opts.check(*ds.metric());
    PingConfig cfg;
    opts.apply(cfg);
    const double load_ms = ms_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    const Dataset unit = ceos_embedding(ds, cfg);
    const double embed_ms = ms_since(t1);
    const auto t2 = std::chrono::steady_clock::now();
    const CeosIndex index = CeosIndex::build(unit, cfg.ceos);
    const double build_ms = ms_since(t2);
    index.save(out);

    RunReport r;
    r.command = "index";
    r.parameters = ceos_json(cfg.ceos);
    r.parameters["memory_guard"] = cfg.ceos.memory_guard;
    r.parameters["embedded_dim"] = unit.d();
    if (*ds.metric() != Metric::cosine) r.parameters["dprime"] = cfg.kernel.d_prime;
    r.parameters["out"] = out;
    r.dataset = cli::fingerprint(ds);
    r.timings_ms = {{"load", load_ms}, {"embed", embed_ms}, {"index", build_ms}};
    r.seeds = opts.seeds();
    r.extra["index"] = bucket_stats(index);
    emit(r);
    return 0;
  }
};

// ---- cluster -------------------------------------------------------------

struct ClusterCommand {
  InputOptions input;
  IndexOptions opts;
  std::string backend = "exact";
  std::string index_path;
  std::string graph = "symmetric";
  std::size_t k = 10;
  std::string algo = "dnp";
  double c = 1.0;
  std::size_t lpa_iters = 100;
  std::string dnp_check = "knn-only";
  std::string dnp_ineligible = "defer";
  std::string out;
  std::string truth;
  std::string noise = "own-cluster";
  CLI::Option* index_opt = nullptr;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("cluster", "Cluster a dataset and write one label per line");
    input.attach(cmd);
    opts.attach(cmd);
    cmd->add_option("--backend", backend, "Neighbor search")->check(CLI::IsMember({"exact", "ceos"}));
    index_opt = cmd->add_option("--index", index_path, "Reuse an index written by 'vdc index'");
    cmd->add_option("--graph", graph, "kNN graph kind")->check(CLI::IsMember({"symmetric", "mutual"}));
    cmd->add_option("--k", k, "Neighbors per point")->check(CLI::PositiveNumber);
    cmd->add_option("--algo", algo, "Propagator")->check(CLI::IsMember({"dnp", "lpa", "louvain"}));
    cmd->add_option("--c", c, "DNP density rank divisor, k' = floor(k / c)")
        ->check(CLI::Range(1.0, 1e9));
    cmd->add_option("--lpa-iters", lpa_iters, "LPA sweep limit")->check(CLI::PositiveNumber);
    cmd->add_option("--dnp-check", dnp_check, "List searched for the predecessor label")
        ->check(CLI::IsMember({"knn-only", "stored-list"}));
    cmd->add_option("--dnp-ineligible", dnp_ineligible,
                    "What happens to a popped point whose kNN lack the predecessor label")
        ->check(CLI::IsMember({"defer", "new-cluster"}));
    cmd->add_option("--out", out, "Labels file to write")->required();
    cmd->add_option("--truth", truth, "Ground-truth labels; adds scores to the report");
    cmd->add_option("--noise", noise, "Treatment of -1 labels when scoring")
        ->check(CLI::IsMember({"own-cluster", "exclude"}));
  }

  int run() {
    if (*index_opt && backend != "ceos") throw UsageError("--index needs --backend ceos");
    const Dataset ds = input.load();
    opts.check(*ds.metric());
    if (k >= ds.n() && ds.n() > 1) {
      throw UsageError("--k " + std::to_string(k) + " must be below n = " + std::to_string(ds.n()));
    }
    PingConfig cfg;
    opts.apply(cfg);
    cfg.k = k;
    cfg.backend = parse_backend(backend);
    cfg.propagator = parse_propagator(algo);
    cfg.graph = parse_graph_kind(graph);
    cfg.dnp_c = c;
    cfg.lpa_iters = lpa_iters;
    cfg.dnp_check = dnp_check == "stored-list" ? DnpCheckSet::stored_list : DnpCheckSet::knn_only;
    cfg.dnp_ineligible =
        dnp_ineligible == "new-cluster" ? DnpIneligible::new_cluster : DnpIneligible::defer;
    if (cfg.propagator == Propagator::dnp && cfg.graph == GraphKind::mutual) {
      std::cerr << "warning: DNP is meant for symmetric graphs or CEOs neighborhoods; "
                   "running on the mutual graph\n";
    }

    std::optional<CeosIndex> index;
    if (*index_opt) {
      index.emplace(CeosIndex::load(index_path));
      cfg.ceos = index->params();
    }
    const PingResult res = ping(ds, cfg, index ? &*index : nullptr);
    save_labels(out, res.labeling.labels);

    const DnpParams dp{cfg.k, cfg.dnp_c, cfg.dnp_check, cfg.dnp_ineligible};
    RunReport r;
    r.command = "cluster";
    r.parameters = {{"backend", backend}, {"graph", graph},    {"k", k},     {"algo", algo},
                    {"c", c},             {"kprime", dp.kprime()}, {"out", out}};
    if (cfg.propagator == Propagator::lpa) r.parameters["lpa_iters"] = lpa_iters;
    if (cfg.propagator == Propagator::dnp) {
      r.parameters["dnp_check"] = dnp_check;
      r.parameters["dnp_ineligible"] = dnp_ineligible;
    }
    if (cfg.backend == Backend::ceos) {
      r.parameters["ceos"] = ceos_json(cfg.ceos);
      if (*index_opt) r.parameters["index"] = index_path;
    }
    r.dataset = cli::fingerprint(ds);
    r.timings_ms = {{"find_knn", res.timings.find_knn_ms},
                    {"build_graph", res.timings.build_graph_ms},
                    {"propagation", res.timings.propagation_ms}};
    r.clusters = res.labeling.n_clusters;
    r.seeds = opts.seeds();
    r.extra["short_lists"] = res.short_lists;
    if (const auto s = maybe_score(truth, res.labeling.labels, noise)) r.scores = cli::scores_json(*s);
    emit(r);
    return 0;
  }
};

// ---- graph ---------------------------------------------------------------

struct GraphCommand {
  InputOptions input;
  std::size_t k = 10;
  std::string graph = "symmetric";
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("graph", "Write the exact kNN graph as text");
    input.attach(cmd);
    cmd->add_option("--k", k, "Neighbors per point")->check(CLI::PositiveNumber);
    cmd->add_option("--graph", graph, "kNN graph kind")->check(CLI::IsMember({"symmetric", "mutual"}));
    cmd->add_option("--out", out, "Graph dump file")->required();
  }

  int run() {
    const Dataset ds = input.load();
    if (k >= ds.n()) throw UsageError("--k must be below n = " + std::to_string(ds.n()));
    const auto t0 = std::chrono::steady_clock::now();
    const KnnLists lists = exact_knn(ds, k, *ds.metric());
    const double knn_ms = ms_since(t0);
    const auto t1 = std::chrono::steady_clock::now();
    const KnnGraph g = build_graph(lists, parse_graph_kind(graph), k);
    const double graph_ms = ms_since(t1);
    std::ofstream f(out);
    if (!f) throw Error("cannot open '" + out + "' for writing");
    write_graph(f, g);
    if (!f) throw Error("write failed for '" + out + "'");

    RunReport r;
    r.command = "graph";
    r.parameters = {{"k", k}, {"graph", graph}, {"out", out}};
    r.dataset = cli::fingerprint(ds);
    r.timings_ms = {{"find_knn", knn_ms}, {"build_graph", graph_ms}};
    r.extra["edges"] = g.edge_count();
    r.extra["components"] = component_count(connected_components(g));
    emit(r);
    return 0;
  }
};

// ---- dbscan --------------------------------------------------------------

struct DbscanCommand {
  InputOptions input;
  double eps = 0.0;
  std::size_t min_pts = 5;
  std::vector<double> eps_list;
  std::string out;
  std::string truth;
  std::string noise = "own-cluster";
  CLI::Option* eps_opt = nullptr;
  CLI::Option* list_opt = nullptr;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("dbscan", "Exact DBSCAN, or DBSCAN* over several radii");
    input.attach(cmd);
    eps_opt = cmd->add_option("--eps", eps, "Radius for plain DBSCAN")->check(CLI::PositiveNumber);
    list_opt = cmd->add_option("--eps-list", eps_list, "Increasing radii for DBSCAN*")
                   ->delimiter(',')
                   ->excludes(eps_opt);
    cmd->add_option("--min-pts", min_pts, "Neighbors (self included) needed to be core")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "Labels file to write")->required();
    cmd->add_option("--truth", truth, "Ground-truth labels; adds scores to the report");
    cmd->add_option("--noise", noise, "Treatment of -1 labels when scoring")
        ->check(CLI::IsMember({"own-cluster", "exclude"}));
  }

  int run() {
    if (!*eps_opt && !*list_opt) throw UsageError("give --eps or --eps-list");
    const Dataset ds = input.load();
    const auto t0 = std::chrono::steady_clock::now();
    Labeling labeling;
    if (*eps_opt) {
      labeling = dbscan(ds, DbscanParams{eps, min_pts}, *ds.metric()).labeling;
    } else {
      DbscanStarConfig cfg;
      cfg.k = min_pts;
      cfg.eps_list = eps_list;
      labeling = dbscan_star(ds, cfg, *ds.metric()).labeling;
    }
    const double ms = ms_since(t0);
    save_labels(out, labeling.labels);

    RunReport r;
    r.command = "dbscan";
    r.parameters = {{"min_pts", min_pts}, {"out", out}};
    if (*eps_opt) {
      r.parameters["eps"] = eps;
    } else {
      r.parameters["eps_list"] = eps_list;
    }
    r.dataset = cli::fingerprint(ds);
    r.timings_ms = {{"cluster", ms}};
    r.clusters = labeling.n_clusters;
    r.extra["noise_points"] = std::count(labeling.labels.begin(), labeling.labels.end(), -1);
    if (const auto s = maybe_score(truth, labeling.labels, noise)) r.scores = cli::scores_json(*s);
    emit(r);
    return 0;
  }
};

// ---- eval ----------------------------------------------------------------

struct EvalCommand {
  std::string pred;
  std::string truth;
  std::string noise = "own-cluster";

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "Score predicted labels against ground truth");
    cmd->add_option("--pred", pred, "Predicted labels")->required();
    cmd->add_option("--truth", truth, "Ground-truth labels")->required();
    cmd->add_option("--noise", noise, "Treatment of -1 predictions")
        ->check(CLI::IsMember({"own-cluster", "exclude"}));
  }

  int run() {
    const auto p = load_labels(pred).labels;
    const auto s = maybe_score(truth, p, noise);
    RunReport r;
    r.command = "eval";
    r.parameters = {{"pred", pred}, {"truth", truth}, {"noise", noise}};
    r.scores = cli::scores_json(*s);
    r.clusters = s->clusters_pred;
    // The score fields are repeated at top level for quick jq access.
    for (const auto& [key, value] : r.scores.items()) r.extra[key] = value;
    emit(r);
    return 0;
  }
};

// ---- bench ---------------------------------------------------------------

struct BenchCommand {
  InputOptions input;
  IndexOptions opts;
  std::string sweep;
  std::size_t k = 10;
  std::string algo = "dnp";
  std::string graph = "symmetric";
  double c = 1.0;
  bool oracle = false;
  std::string truth;
  std::string csv;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench", "Sweep CEOs and propagation parameters");
    input.attach(cmd);
    opts.attach(cmd);
    cmd->add_option("--sweep", sweep, "e.g. \"s=10,20;m=25,50;k=8\"; keys D s m k c kprime seed")
        ->required();
    cmd->add_option("--k", k, "Default neighbors per point")->check(CLI::PositiveNumber);
    cmd->add_option("--algo", algo, "Propagator, or none to time the index only")
        ->check(CLI::IsMember({"dnp", "lpa", "louvain", "none"}));
    cmd->add_option("--graph", graph, "kNN graph kind")->check(CLI::IsMember({"symmetric", "mutual"}));
    cmd->add_option("--c", c, "Default DNP divisor")->check(CLI::Range(1.0, 1e9));
    cmd->add_flag("--oracle", oracle, "Report recall@k against brute-force kNN");
    cmd->add_option("--truth", truth, "Ground-truth labels; adds AMI/NMI/ARI per row");
    cmd->add_option("--csv", csv, "Also write the rows as CSV");
  }

  int run() {
    const auto points = cli::parse_sweep(sweep, {"D", "s", "m", "k", "c", "kprime", "seed"});
    const Dataset ds = input.load();
    opts.check(*ds.metric());
    std::vector<std::int64_t> truth_labels;
    if (!truth.empty()) {
      truth_labels = load_labels(truth).labels;
      if (truth_labels.size() != ds.n()) throw Error("truth length does not match the dataset");
    }
    auto as_count = [](const cli::SweepPoint& p, const char* key, std::size_t fallback) {
      const auto it = p.find(key);
      if (it == p.end()) return fallback;
      if (!(it->second >= 1.0) || it->second != std::floor(it->second)) {
        throw UsageError(std::string("sweep value for ") + key + " must be a positive integer");
      }
      return static_cast<std::size_t>(it->second);
    };

    KnnLists exact;
    double oracle_ms = 0.0;
    if (oracle) {
      std::size_t kmax = 0;
      for (const auto& p : points) kmax = std::max(kmax, as_count(p, "k", k));
      if (kmax >= ds.n()) throw UsageError("k must be below n for the oracle");
      const auto t0 = std::chrono::steady_clock::now();
      exact = exact_knn(ds, kmax, *ds.metric());
      oracle_ms = ms_since(t0);
    }

    json rows = json::array();
    for (const auto& p : points) {
      IndexOptions o = opts;
      o.ceos.D = as_count(p, "D", opts.ceos.D);
      o.ceos.s = as_count(p, "s", opts.ceos.s);
      o.ceos.m = as_count(p, "m", opts.ceos.m);
      o.seed = p.count("seed") ? as_count(p, "seed", 0) : opts.seed;
      PingConfig cfg;
      o.apply(cfg);
      cfg.backend = Backend::ceos;
      cfg.graph = parse_graph_kind(graph);
      cfg.k = as_count(p, "k", k);
      cfg.dnp_c = p.count("c") ? p.at("c") : c;
      if (p.count("kprime")) {
        if (p.count("c")) throw UsageError("sweep c and kprime together");
        cfg.dnp_c = static_cast<double>(cfg.k) / static_cast<double>(as_count(p, "kprime", 1));
        if (cfg.dnp_c < 1.0) throw UsageError("kprime cannot exceed k");
      }
      cfg.propagator = algo == "none" ? Propagator::dnp : parse_propagator(algo);
      cfg.keep_knn = oracle;

      json row = {{"D", cfg.ceos.D}, {"s", cfg.ceos.s},  {"m", cfg.ceos.m},
                  {"k", cfg.k},      {"seed", o.seed}};
      if (algo == "none") {
        const auto t0 = std::chrono::steady_clock::now();
        const Dataset unit = ceos_embedding(ds, cfg);
        const CeosIndex index = CeosIndex::build(unit, cfg.ceos);
        const NeighborhoodSet nbrs = query_all(unit, index);
        row["find_knn_ms"] = ms_since(t0);
        if (oracle) row["recall"] = recall_at(knn_lists_from_neighborhoods(nbrs, cfg.k), exact, cfg.k);
      } else {
        const PingResult res = ping(ds, cfg);
        if (cfg.propagator == Propagator::dnp) {
          row["c"] = cfg.dnp_c;
          row["kprime"] = DnpParams{cfg.k, cfg.dnp_c}.kprime();
        }
        row["find_knn_ms"] = res.timings.find_knn_ms;
        row["build_graph_ms"] = res.timings.build_graph_ms;
        row["propagation_ms"] = res.timings.propagation_ms;
        row["clusters"] = res.labeling.n_clusters;
        row["short_lists"] = res.short_lists;
        if (oracle) row["recall"] = recall_at(res.knn, exact, cfg.k);
        if (!truth_labels.empty()) {
          const auto s = evaluate(res.labeling.labels, truth_labels);
          row["ami"] = s.ami;
          row["nmi"] = s.nmi;
          row["ari"] = s.ari;
        }
      }
      rows.push_back(row);
      std::cerr << "bench: " << row.dump() << "\n";
    }

    if (!csv.empty()) write_csv(rows);
    RunReport r;
    r.command = "bench";
    r.parameters = {{"sweep", sweep}, {"algo", algo}, {"graph", graph}, {"oracle", oracle}};
    r.dataset = cli::fingerprint(ds);
    if (oracle) r.timings_ms["oracle"] = oracle_ms;
    r.seeds = opts.seeds();
    r.extra["rows"] = rows;
    emit(r);
    return 0;
  }

  // Columns are the union of row keys, in first-seen order.
  void write_csv(const json& rows) const {
    std::vector<std::string> cols;
    for (const auto& row : rows) {
      for (const auto& [key, value] : row.items()) {
        if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
      }
    }
    std::ofstream f(csv);
    if (!f) throw Error("cannot open '" + csv + "' for writing");
    for (std::size_t i = 0; i < cols.size(); ++i) f << (i ? "," : "") << cols[i];
    f << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) f << ",";
        if (row.contains(cols[i])) f << row[cols[i]].dump();
      }
      f << "\n";
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate kNN graph clustering with CEOs neighborhoods"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = 0;
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (default: VDC_THREADS or all cores)")
                          ->check(CLI::PositiveNumber);

  IndexCommand index_cmd;
  ClusterCommand cluster_cmd;
  GraphCommand graph_cmd;
  DbscanCommand dbscan_cmd;
  EvalCommand eval_cmd;
  BenchCommand bench_cmd;
  index_cmd.attach(app);
  cluster_cmd.attach(app);
  graph_cmd.attach(app);
  dbscan_cmd.attach(app);
  eval_cmd.attach(app);
  bench_cmd.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*threads_opt) set_num_threads(threads);
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "index") return index_cmd.run();
    if (name == "cluster") return cluster_cmd.run();
    if (name == "graph") return graph_cmd.run();
    if (name == "dbscan") return dbscan_cmd.run();
    if (name == "eval") return eval_cmd.run();
    if (name == "bench") return bench_cmd.run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
