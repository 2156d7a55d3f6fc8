#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dowker/cli.hpp"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  std::vector<std::string> full{"dowker"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : full) argv.push_back(a.c_str());
  return dowker::cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("dowker-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  out << text;
}

json slurp_json(const std::string& file) { return json::parse(slurp(file)); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  CHECK(run({}) == 1);                                    // subcommand required
  CHECK(run({"frobnicate"}) == 1);                        // unknown subcommand
  CHECK(run({"pd"}) == 1);                                // missing input
  CHECK(run({"pd", "x.tsv", "--kind", "bogus"}) == 1);    // bad enum
  CHECK(run({"wdist", "a.json"}) == 1);                   // missing positional
  CHECK(run({"gen", "--family", "nope", "--out-dir", "d"}) == 1);
  CHECK(run({"pd", "x.tsv", "--no-such-flag"}) == 1);
}

TEST_CASE("help exits 0") {
  CHECK(run({"--help"}) == 0);
  CHECK(run({"pd", "--help"}) == 0);
}

TEST_CASE("data errors exit 2") {
  TempDir dir;
  CHECK(run({"pd", dir / "missing.tsv"}) == 2);
  CHECK(run({"predict", "--model", dir / "missing.json", dir / "missing.tsv"}) == 2);

  const std::string bad = dir / "bad.json";
  spit(bad, "{ not json");
  CHECK(run({"wdist", bad, bad}) == 2);

  const std::string noisy = dir / "noisy.json";
  spit(noisy, R"({"dim": 0, "points": [[0.5]]})");  // wrong arity
  CHECK(run({"wdist", noisy, noisy}) == 2);

  const std::string selfloop = dir / "graph.tsv";
  spit(selfloop, "zero\tzero\t0.5\n");
  CHECK(run({"train", "--data", dir / "nowhere"}) == 2);
}

TEST_CASE("gen families write deterministic datasets") {
  TempDir a, b;
  CHECK(run({"gen", "--family", "random_temporal", "--out-dir", a / "r", "--count", "3",
             "--seed", "5", "--min-nodes", "6", "--max-nodes", "9", "--min-edges", "8",
             "--max-edges", "14"}) == 0);
  CHECK(run({"gen", "--family", "random_temporal", "--out-dir", b / "r", "--count", "3",
             "--seed", "5", "--min-nodes", "6", "--max-nodes", "9", "--min-edges", "8",
             "--max-edges", "14"}) == 0);
  for (const char* name : {"g0000.tsv", "g0001.tsv", "g0002.tsv"}) {
    CHECK(slurp(a / ("r/" + std::string(name))) == slurp(b / ("r/" + std::string(name))));
  }
  CHECK_FALSE(fs::exists(fs::path(a / "r") / "labels.tsv"));

  CHECK(run({"gen", "--family", "classification", "--out-dir", a / "c", "--count", "4",
             "--seed", "11"}) == 0);
  const std::string labels = slurp(a / "c/labels.tsv");
  CHECK(labels == "g0000\t0\ng0001\t1\ng0002\t0\ng0003\t1\n");

  CHECK(run({"gen", "--family", "fig1b_triple", "--out-dir", a / "t"}) == 0);
  CHECK(fs::exists(fs::path(a / "t") / "g0002.tsv"));

  CHECK(run({"gen", "--family", "star", "--out-dir", a / "s", "--spokes", "4"}) == 0);
  std::istringstream star(slurp(a / "s/g0000.tsv"));
  std::string line;
  int edges = 0;
  while (std::getline(star, line))
    if (!line.empty() && line[0] != '#') ++edges;
  CHECK(edges == 4);

  CHECK(run({"gen", "--family", "diffusion_tree", "--out-dir", a / "d", "--count", "2",
             "--seed", "3", "--min-nodes", "5", "--max-nodes", "5", "--label", "1"}) == 0);
  CHECK(slurp(a / "d/labels.tsv") == "g0000\t1\ng0001\t1\n");
}

TEST_CASE("pd bundle, skeleton dump, and byte-stable reruns") {
  TempDir dir;
  REQUIRE(run({"gen", "--family", "star", "--out-dir", dir / "s", "--spokes", "3"}) == 0);
  const std::string graph = dir / "s/g0000.tsv";

  const std::string out1 = dir / "pd1.json";
  const std::string out2 = dir / "pd2.json";
  const std::string skel = dir / "skel.json";
  REQUIRE(run({"pd", graph, "--raw", "-o", out1, "--skeleton-out", skel}) == 0);
  REQUIRE(run({"pd", graph, "--raw", "-o", out2}) == 0);
  CHECK(slurp(out1) == slurp(out2));

  json j = slurp_json(out1);
  CHECK(j.at("kind") == "sink");
  CHECK(j.at("pd0").at("dim") == 0);
  // The triangle closes the moment the last pair appears: one diagonal point.
  REQUIRE(j.at("pd1").at("points").size() == 1);
  CHECK(j.at("pd1").at("points")[0][0] == j.at("pd1").at("points")[0][1]);
  CHECK(j.at("edge_map").size() == 3);  // one entry per edge
  CHECK(j.at("edge_map").at("0").at("class") == "unpaired");

  json sk = slurp_json(skel);
  CHECK(sk.at("kind") == "sink");
  const auto& simplices = sk.at("simplices");
  CHECK(simplices.size() == 7);  // 3 vertices, 3 pairs, 1 triple
  for (std::size_t i = 1; i < simplices.size(); ++i) {
    CHECK(simplices[i - 1].at("value").get<double>() <=
          simplices[i].at("value").get<double>());
  }
}

TEST_CASE("wdist records and self-distance zero") {
  TempDir dir;
  REQUIRE(run({"gen", "--family", "cycle", "--out-dir", dir / "c", "--cycle-k", "2"}) == 0);
  const std::string bundle = dir / "pd.json";
  REQUIRE(run({"pd", dir / "c/g0000.tsv", "--raw", "-o", bundle}) == 0);

  const std::string out = dir / "wd.json";
  REQUIRE(run({"wdist", bundle, bundle, "-o", out}) == 0);
  json rows = slurp_json(out);
  REQUIRE(rows.size() == 2);  // default dims 0 and 1
  for (const json& r : rows) {
    CHECK(r.at("a") == bundle);
    CHECK(r.at("wd") == 0.0);
  }

  REQUIRE(run({"wdist", bundle, bundle, "--dim", "1", "--keep-zero", "--cap", "0.9",
               "-o", out}) == 0);
  rows = slurp_json(out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("dim") == 1);
}

TEST_CASE("pimage emits the requested grid") {
  TempDir dir;
  REQUIRE(run({"gen", "--family", "star", "--out-dir", dir / "s", "--spokes", "3"}) == 0);
  const std::string bundle = dir / "pd.json";
  REQUIRE(run({"pd", dir / "s/g0000.tsv", "--raw", "-o", bundle}) == 0);

  const std::string out = dir / "img.csv";
  REQUIRE(run({"pimage", bundle, "--dim", "0", "--rows", "4", "--cols", "5", "-o", out}) == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  int rows = 0;
  double total = 0.0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string cell;
    int cols = 0;
    while (std::getline(fields, cell, ',')) {
      total += std::stod(cell);
      ++cols;
    }
    CHECK(cols == 5);
  }
  CHECK(rows == 4);
  CHECK(total > 0.0);
}

TEST_CASE("duality report on generated graphs") {
  TempDir dir;
  REQUIRE(run({"gen", "--family", "random_temporal", "--out-dir", dir / "r", "--count",
               "3", "--seed", "9", "--min-nodes", "6", "--max-nodes", "10",
               "--min-edges", "10", "--max-edges", "18"}) == 0);
  const std::string out = dir / "rep.json";
  std::vector<std::string> args{"duality"};
  for (int i = 0; i < 3; ++i) args.push_back(dir / ("r/g000" + std::to_string(i) + ".tsv"));
  args.insert(args.end(), {"--workers", "2", "-o", out});
  CHECK(run(args) == 0);

  json rows = slurp_json(out);
  REQUIRE(rows.size() == 3);
  for (const json& r : rows) {
    CHECK(r.at("pd0_match") == true);
    CHECK(r.at("pd1_match") == true);
  }

  // A single input produces a bare record.
  CHECK(run({"duality", dir / "r/g0000.tsv", "-o", out}) == 0);
  CHECK(slurp_json(out).contains("input"));
}

TEST_CASE("config file fills defaults and flags win") {
  TempDir dir;
  const std::string conf = dir / "conf.ini";
  spit(conf, "[gen]\nspokes=5\n");

  REQUIRE(run({"--config", conf, "gen", "--family", "star", "--out-dir", dir / "a"}) == 0);
  std::istringstream from_conf(slurp(dir / "a/g0000.tsv"));
  std::string line;
  int edges = 0;
  while (std::getline(from_conf, line)) edges += !line.empty();
  CHECK(edges == 5);

  REQUIRE(run({"--config", conf, "gen", "--family", "star", "--out-dir", dir / "b",
               "--spokes", "3"}) == 0);
  std::istringstream from_flag(slurp(dir / "b/g0000.tsv"));
  edges = 0;
  while (std::getline(from_flag, line)) edges += !line.empty();
  CHECK(edges == 3);

  // The same file is picked up through the environment default.
  ::setenv("DOWKER_CONFIG", conf.c_str(), 1);
  REQUIRE(run({"gen", "--family", "star", "--out-dir", dir / "c"}) == 0);
  ::unsetenv("DOWKER_CONFIG");
  CHECK(slurp(dir / "c/g0000.tsv") == slurp(dir / "a/g0000.tsv"));
}

TEST_CASE("train, predict, eval, classify round trip") {
  TempDir dir;
  REQUIRE(run({"gen", "--family", "classification", "--out-dir", dir / "data", "--count",
               "6", "--seed", "21"}) == 0);

  const std::string model = dir / "model.json";
  const std::string history = dir / "history.csv";
  const std::string summary = dir / "summary.json";
  std::vector<std::string> train_args{
      "train",    "--data",   dir / "data", "--model-out", model,  "--history", history,
      "--epochs", "2",        "--hidden",   "4",           "--layers", "1",
      "--seed",   "3",        "-o",         summary};
  REQUIRE(run(train_args) == 0);

  json s = slurp_json(summary);
  CHECK(s.at("graphs") == 6);
  CHECK(s.at("train_size").get<int>() + s.at("test_size").get<int>() == 6);
  CHECK(s.at("final").at("train_loss").get<double>() > 0.0);

  std::istringstream hist(slurp(history));
  std::string line;
  std::getline(hist, line);
  CHECK(line == "epoch,train_loss,test_wd0,test_wd1,accuracy");
  int rows = 0;
  while (std::getline(hist, line)) rows += !line.empty();
  CHECK(rows == 2);

  // Same seed, same bytes: model, history, and summary all reproduce.
  const std::string model2 = dir / "model2.json";
  const std::string history2 = dir / "history2.csv";
  const std::string summary2 = dir / "summary2.json";
  std::vector<std::string> again{
      "train",    "--data",   dir / "data", "--model-out", model2, "--history", history2,
      "--epochs", "2",        "--hidden",   "4",           "--layers", "1",
      "--seed",   "3",        "-o",         summary2};
  REQUIRE(run(again) == 0);
  CHECK(slurp(model) == slurp(model2));
  CHECK(slurp(history) == slurp(history2));
  CHECK(slurp_json(summary2).at("final") == s.at("final"));

  const std::string pred = dir / "pred.json";
  REQUIRE(run({"predict", "--model", model, dir / "data/g0000.tsv", "-o", pred}) == 0);
  json p = slurp_json(pred);
  CHECK(p.at("pd0").at("points").size() > 0);
  CHECK(p.at("scores").size() == 2);
  CHECK((p.at("label") == 0 || p.at("label") == 1));

  const std::string ev = dir / "eval.json";
  REQUIRE(run({"eval", "--model", model, "--data", dir / "data", "-o", ev}) == 0);
  json e = slurp_json(ev);
  CHECK(e.at("per_graph").size() == 6);
  CHECK(e.at("summary").at("mean_wd0").get<double>() >= 0.0);
  CHECK(e.at("summary").at("accuracy").get<double>() >= 0.0);

  const std::string cls = dir / "folds.json";
  REQUIRE(run({"classify", "--synthetic", "6", "--folds", "2", "--epochs", "2",
               "--hidden", "4", "--layers", "1", "--seed", "3", "-o", cls}) == 0);
  json c = slurp_json(cls);
  CHECK(c.at("folds").size() == 2);
  const double acc = c.at("mean_accuracy").get<double>();
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
}

TEST_CASE("bench results are deterministic, timings are separate") {
  TempDir dir;
  const std::string r1 = dir / "bench1.json";
  const std::string r2 = dir / "bench2.json";
  const std::string t1 = dir / "timings1.json";
  REQUIRE(run({"bench", "--seed", "2", "--oracle-graphs", "4", "--large-edges", "150",
               "-o", r1, "--timings", t1}) == 0);
  REQUIRE(run({"bench", "--seed", "2", "--oracle-graphs", "4", "--large-edges", "150",
               "-o", r2, "--timings", dir / "timings2.json"}) == 0);
  CHECK(slurp(r1) == slurp(r2));

  json res = slurp_json(r1);
  CHECK(res.at("oracle_check").at("all_match") == true);
  CHECK(res.at("large_graph").at("edges") == 150);
  CHECK(res.at("large_graph").at("parallel_equals_serial") == true);

  json tim = slurp_json(t1);
  CHECK(tim.at("speedup").get<double>() > 0.0);
  CHECK_FALSE(slurp(r1).find("speedup") != std::string::npos);
}

}  // TEST_SUITE
