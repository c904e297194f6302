// Drives the vdc binary through a shell and checks exit codes, files and
// the JSON reports it prints.

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "sweep.hpp"
#include "vdc/error.hpp"
#include "vdc/io.hpp"
#include "vdc/metrics.hpp"

using namespace vdc;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Run vdc_run(const std::string& args) {
  const auto out = test::temp_path("cli_stdout.txt");
  const auto err = test::temp_path("cli_stderr.txt");
  const std::string cmd =
      std::string(VDC_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// The pinned report layout: every key present, with the documented types.
void check_schema(const json& j, const std::string& command) {
  REQUIRE(j.is_object());
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("command") == command);
  CHECK(j.at("parameters").is_object());
  CHECK(j.at("seeds").is_object());
  CHECK((j.at("clusters").is_null() || j.at("clusters").is_number_unsigned()));
  const auto& ds = j.at("dataset");
  if (!ds.is_null()) {
    CHECK(ds.at("n").is_number_unsigned());
    CHECK(ds.at("d").is_number_unsigned());
    CHECK(ds.at("metric").is_string());
    CHECK(ds.at("hash").get<std::string>().size() == 16);
  }
  REQUIRE(j.at("timings_ms").is_object());
  for (const auto& [stage, ms] : j.at("timings_ms").items()) {
    CHECK(ms.is_number());
    CHECK(ms.get<double>() >= 0.0);
  }
  const auto& s = j.at("scores");
  if (!s.is_null()) {
    for (const char* key : {"ami", "nmi", "ari"}) CHECK(s.at(key).is_number());
    for (const char* key : {"clusters_pred", "clusters_true", "noise"}) {
      CHECK(s.at(key).is_number_unsigned());
    }
  }
}

struct Files {
  std::filesystem::path blobs = test::temp_path("cli_blobs.csv");
  std::filesystem::path truth = test::temp_path("cli_blobs_truth.txt");
  std::filesystem::path unit = test::temp_path("cli_unit.fvecs");
  std::filesystem::path unit_truth = test::temp_path("cli_unit_truth.txt");

  Files() {
    const auto b = test::gaussian_blobs({{0.0, 0.0}, {10.0, 0.0}}, {1.0, 1.0}, {200, 200}, 7);
    save_csv(blobs, b.data);
    save_labels(truth, b.truth);
    const auto u = test::clustered_unit_vectors(5000, 32, 10, 0.3, 11);
    save_fvecs(unit, u.data);
    save_labels(unit_truth, u.truth);
  }
};

const Files& files() {
  static const Files f;
  return f;
}

}  // namespace

TEST_CASE("sweep parsing") {
  const std::vector<std::string> keys{"s", "m", "k"};
  const auto pts = cli::parse_sweep("s=10,20;m=25,50;k=8", keys);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == cli::SweepPoint{{"s", 10}, {"m", 25}, {"k", 8}});
  CHECK(pts[1] == cli::SweepPoint{{"s", 10}, {"m", 50}, {"k", 8}});
  CHECK(pts[3] == cli::SweepPoint{{"s", 20}, {"m", 50}, {"k", 8}});
  CHECK(cli::parse_sweep(" s = 5 ;", keys).size() == 1);
  CHECK_THROWS_AS(cli::parse_sweep("", keys), ConfigError);
  CHECK_THROWS_AS(cli::parse_sweep("s", keys), ConfigError);
  CHECK_THROWS_AS(cli::parse_sweep("s=", keys), ConfigError);
  CHECK_THROWS_AS(cli::parse_sweep("s=1x", keys), ConfigError);
  CHECK_THROWS_AS(cli::parse_sweep("q=1", keys), ConfigError);
  CHECK_THROWS_AS(cli::parse_sweep("s=1;s=2", keys), ConfigError);
}

TEST_CASE("cluster: blobs with exact DNP") {
  const auto& f = files();
  const auto labels = test::temp_path("cli_labels.txt");
  const auto r = vdc_run("cluster --input " + q(f.blobs) + " --metric l2 --backend exact --k 10 --algo dnp --out " +
                         q(labels) + " --truth " + q(f.truth));
  REQUIRE(r.code == 0);
  const auto j = r.report();
  check_schema(j, "cluster");
  CHECK(j["clusters"] == 2);
  CHECK(j["dataset"]["n"] == 400);
  CHECK(j["scores"]["ari"] == 1.0);
  CHECK(j["timings_ms"].contains("find_knn"));
  CHECK(j["timings_ms"].contains("build_graph"));
  CHECK(j["timings_ms"].contains("propagation"));
  CHECK(load_labels(labels).labels.size() == 400);
}

TEST_CASE("cluster: usage errors exit with 2") {
  const auto& f = files();
  const auto labels = test::temp_path("cli_labels.txt");
  auto r = vdc_run("cluster --k 10 --out " + q(labels));
  CHECK(r.code == 2);
  CHECK(r.err.find("--input") != std::string::npos);
  CHECK(r.out.empty());

  r = vdc_run("cluster --input " + q(f.blobs) + " --metric l2 --k 0 --out " + q(labels));
  CHECK(r.code == 2);
  r = vdc_run("cluster --input " + q(f.blobs) + " --metric l2 --algo kmeans --out " + q(labels));
  CHECK(r.code == 2);
  r = vdc_run("cluster --input " + q(f.blobs) + " --metric l2 --index x.idx --out " + q(labels));
  CHECK(r.code == 2);
  r = vdc_run("frobnicate");
  CHECK(r.code == 2);
  CHECK(vdc_run("--help").code == 0);
}

TEST_CASE("cluster: runtime failures exit with 1") {
  const auto labels = test::temp_path("cli_labels.txt");
  const auto r = vdc_run("cluster --input /nonexistent/data.csv --out " + q(labels));
  CHECK(r.code == 1);
  CHECK(r.err.find("nonexistent") != std::string::npos);
}

TEST_CASE("cluster: DNP with c = 5 and k = 100 uses k' = 20") {
  const auto& f = files();
  const auto labels = test::temp_path("cli_labels.txt");
  const auto r = vdc_run("cluster --input " + q(f.blobs) + " --metric l2 --k 100 --algo dnp --c 5 --out " +
                         q(labels));
  REQUIRE(r.code == 0);
  CHECK(r.report()["parameters"]["kprime"] == 20);
}

TEST_CASE("cluster: DNP on the mutual graph warns but runs") {
  const auto& f = files();
  const auto labels = test::temp_path("cli_labels.txt");
  const auto r = vdc_run("cluster --input " + q(f.blobs) + " --metric l2 --graph mutual --out " + q(labels));
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("index: bucket stats, determinism and reuse") {
  const auto& f = files();
  const auto a = test::temp_path("cli_a.idx");
  const auto b = test::temp_path("cli_b.idx");
  const std::string base = "index --input " + q(f.unit) + " --D 128 --s 20 --m 50 --seed 3 --out ";
  const auto r = vdc_run(base + q(a));
  REQUIRE(r.code == 0);
  const auto j = r.report();
  check_schema(j, "index");
  CHECK(j["parameters"]["D"] == 128);
  CHECK(j["index"]["buckets"] == 128 * 128);
  CHECK(j["index"]["total_entries"].get<std::size_t>() > 0);
  CHECK(j["index"]["max_bucket_size"].get<std::size_t>() <= 50);
  REQUIRE(vdc_run(base + q(b)).code == 0);
  CHECK(slurp(a) == slurp(b));

  CHECK(vdc_run("index --input " + q(f.unit) + " --sigma 2 --out " + q(a)).code == 2);

  // A saved index gives the same labels as building in place.
  const auto l1 = test::temp_path("cli_l1.txt");
  const auto l2 = test::temp_path("cli_l2.txt");
  const std::string cl = "cluster --input " + q(f.unit) + " --backend ceos --k 10 --seed 3 --out ";
  REQUIRE(vdc_run(cl + q(l1) + " --index " + q(b)).code == 0);
  REQUIRE(vdc_run(cl + q(l2)).code == 0);
  CHECK(slurp(l1) == slurp(l2));
}

TEST_CASE("cluster: labels do not depend on the thread count") {
  const auto& f = files();
  const auto l1 = test::temp_path("cli_t1.txt");
  const auto l3 = test::temp_path("cli_t3.txt");
  for (const char* algo : {"dnp", "louvain"}) {
    const std::string args = std::string(" cluster --input ") + q(f.unit) +
                             " --backend ceos --k 10 --algo " + algo + " --out ";
    REQUIRE(vdc_run("--threads 1" + args + q(l1)).code == 0);
    REQUIRE(vdc_run("--threads 3" + args + q(l3)).code == 0);
    CHECK(slurp(l1) == slurp(l3));
  }
}

TEST_CASE("eval") {
  const auto& f = files();
  auto r = vdc_run("eval --pred " + q(f.truth) + " --truth " + q(f.truth));
  REQUIRE(r.code == 0);
  auto j = r.report();
  check_schema(j, "eval");
  CHECK(j["ami"] == 1.0);
  CHECK(j["nmi"] == 1.0);
  CHECK(j["ari"] == 1.0);

  // A noisy prediction, then the same prediction with shuffled ids.
  auto truth = load_labels(f.truth).labels;
  std::vector<std::int64_t> pred(truth.size());
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = i % 7 == 0 ? 2 : truth[i];
  pred[5] = -1;
  const auto p1 = test::temp_path("cli_pred1.txt");
  const auto p2 = test::temp_path("cli_pred2.txt");
  save_labels(p1, pred);
  for (auto& v : pred) v = v < 0 ? v : 10 - v;
  save_labels(p2, pred);
  const auto j1 = vdc_run("eval --pred " + q(p1) + " --truth " + q(f.truth)).report();
  const auto j2 = vdc_run("eval --pred " + q(p2) + " --truth " + q(f.truth)).report();
  CHECK(j1["scores"] == j2["scores"]);

  // Same numbers as the library, bit for bit.
  const auto lib = evaluate(load_labels(p1).labels, truth);
  CHECK(j1["ami"].get<double>() == lib.ami);
  CHECK(j1["nmi"].get<double>() == lib.nmi);
  CHECK(j1["ari"].get<double>() == lib.ari);
  CHECK(j1["noise"] == 1);
  const auto ex = vdc_run("eval --noise exclude --pred " + q(p1) + " --truth " + q(f.truth)).report();
  CHECK(ex["ari"].get<double>() == evaluate(load_labels(p1).labels, truth, NoisePolicy::exclude).ari);

  const auto shortp = test::temp_path("cli_short.txt");
  save_labels(shortp, {0, 1, 0});
  r = vdc_run("eval --pred " + q(shortp) + " --truth " + q(f.truth));
  CHECK(r.code == 1);
  CHECK(r.err.find("400") != std::string::npos);
  CHECK(r.err.find("3") != std::string::npos);
}

TEST_CASE("bench: recall sweep over s" * doctest::timeout(120)) {
  const auto& f = files();
  const auto csv = test::temp_path("cli_bench.csv");
  const auto r = vdc_run("bench --input " + q(f.unit) + " --sweep 's=10,20' --k 10 --oracle --csv " + q(csv));
  REQUIRE(r.code == 0);
  const auto j = r.report();
  check_schema(j, "bench");
  const auto& rows = j["rows"];
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["s"] == 10);
  CHECK(rows[1]["s"] == 20);
  CHECK(rows[1]["recall"].get<double>() >= rows[0]["recall"].get<double>());
  CHECK(rows[0]["recall"].get<double>() > 0.01);
  // Header plus one line per row.
  const auto text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("bench: one AMI per k'" * doctest::timeout(120)) {
  const auto& f = files();
  const auto r = vdc_run("bench --input " + q(f.unit) + " --k 50 --sweep 'kprime=10,15,20,25' --truth " +
                         q(f.unit_truth));
  REQUIRE(r.code == 0);
  const auto rows = r.report()["rows"];
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rows[i]["kprime"] == 10 + 5 * i);
    CHECK(rows[i]["ami"].is_number());
  }
}

TEST_CASE("bench: malformed sweeps are usage errors") {
  const auto& f = files();
  CHECK(vdc_run("bench --input " + q(f.unit) + " --sweep ''").code == 2);
  CHECK(vdc_run("bench --input " + q(f.unit) + " --sweep 'x=1'").code == 2);
  CHECK(vdc_run("bench --input " + q(f.unit) + " --sweep 's=1.5'").code == 2);
  CHECK(vdc_run("bench --input " + q(f.unit)).code == 2);
}

TEST_CASE("graph dump and dbscan") {
  const auto& f = files();
  const auto g = test::temp_path("cli_graph.txt");
  auto r = vdc_run("graph --input " + q(f.blobs) + " --metric l2 --k 5 --out " + q(g));
  REQUIRE(r.code == 0);
  check_schema(r.report(), "graph");
  const auto text = slurp(g);
  CHECK(text.rfind("400 5 symmetric\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + r.report()["edges"].get<long>());

  const auto labels = test::temp_path("cli_db.txt");
  r = vdc_run("dbscan --input " + q(f.blobs) + " --metric l2 --eps 1 --min-pts 5 --out " + q(labels) +
              " --truth " + q(f.truth) + " --noise exclude");
  REQUIRE(r.code == 0);
  check_schema(r.report(), "dbscan");
  CHECK(r.report()["clusters"] == 2);
  CHECK(vdc_run("dbscan --input " + q(f.blobs) + " --metric l2 --out " + q(labels)).code == 2);
  CHECK(vdc_run("dbscan --input " + q(f.blobs) + " --metric l2 --eps-list 2,1 --out " + q(labels)).code == 2);
  r = vdc_run("dbscan --input " + q(f.blobs) + " --metric l2 --eps-list 0.5,1 --min-pts 10 --out " + q(labels));
  CHECK(r.code == 0);
}
