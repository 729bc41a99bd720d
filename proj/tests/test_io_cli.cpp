#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rde/cli.hpp"
#include "rde/engine.hpp"
#include "rde/io.hpp"

using namespace rde;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("rde_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string without_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

int run(RunConfig c) {
  std::ostringstream log, err;
  return run_command(c, log, err);
}

}  // namespace

TEST_CASE("pool csv round trip keeps the sentinel and vectors") {
  fs::path d = scratch("csv");
  SamplePool p({Value(1.5), Value::infinity(), Value(-2.25), Value(0.1)});
  write_pool_csv((d / "p.csv").string(), p, "R");
  SamplePool q = read_pool_csv((d / "p.csv").string());
  CHECK(q.values() == p.values());
  CHECK(slurp(d / "p.csv").find("inf") != std::string::npos);
  json side = json::parse(slurp(d / "p.csv.json"));
  CHECK(side["size"] == 4);
  SamplePool v({Value::vec2(1, 2), Value::vec2(3, 4)});
  write_pool_csv((d / "v.csv").string(), v, "R2");
  CHECK(read_pool_csv((d / "v.csv").string()).values() == v.values());
}

TEST_CASE("pool binary round trip") {
  fs::path d = scratch("bin");
  SamplePool p({Value(1.0 / 3), Value::infinity(), Value(7.0)});
  write_pool_binary((d / "p.bin").string(), p, "R");
  CHECK(read_pool_binary((d / "p.bin").string()).values() == p.values());
  std::ofstream((d / "junk.bin").string()) << "not a pool";
  CHECK_THROWS(read_pool_binary((d / "junk.bin").string()));
}

TEST_CASE("histogram counts every value once") {
  std::vector<Value> v;
  Rng r(1);
  for (int i = 0; i < 10000; ++i) v.push_back(r.uniform() < 0.2 ? Value::infinity() : Value(r.normal()));
  Histogram h = histogram(SamplePool(v));
  std::size_t total = h.inf_count;
  for (auto c : h.count) total += c;
  CHECK(total == 10000);
  CHECK(h.inf_count > 1500);
  fs::path d = scratch("hist");
  write_histogram_csv((d / "h.csv").string(), h);
  std::string s = slurp(d / "h.csv");
  CHECK(s.rfind("bin_lo,bin_hi,count\n", 0) == 0);
  CHECK(s.find("inf,inf," + std::to_string(h.inf_count)) != std::string::npos);
}

TEST_CASE("run config json round trip and params") {
  RunConfig c;
  c.command = "iterate";
  c.entry = "lindley";
  c.params = {{"c", 1.5}, {"xi", std::string("exp:1")}};
  c.lo = 0.25;
  RunConfig d = config_from_json(config_json(c));
  CHECK(config_json(d).dump() == config_json(c).dump());
  CHECK_THROWS_AS(config_from_json(json{{"mystery", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"pool", "many"}}), std::invalid_argument);
  auto [k, v] = parse_param("c=1.25");
  CHECK(k == "c");
  CHECK(std::get<double>(v) == 1.25);
  CHECK(std::get<std::string>(parse_param("xi=normal:0:1").second) == "normal:0:1");
  CHECK_THROWS(parse_param("novalue"));
}

TEST_CASE("list shows the registry") {
  std::ostringstream log;
  CHECK(cmd_list(log) == exit_ok);
  std::string s = log.str();
  CHECK(s.find("meanfield_matching") != std::string::npos);
  CHECK(s.find("frozen_perc  [[1/2,1] u {inf}]  oracle=closed_cdf") != std::string::npos);
}

TEST_CASE("iterate exit codes and artifacts") {
  fs::path d = scratch("iter");
  RunConfig c;
  c.command = "iterate";
  c.entry = "no_such_entry";
  c.out = (d / "x").string();
  CHECK(run(c) == exit_config);
  c.entry = "lindley";
  c.params = {{"c", -1.0}};
  CHECK(run(c) == exit_config);
  c.params = {{"c", 1.5}};
  c.pool = 2000;
  c.iters = 2;
  c.tol = 1e-9;
  CHECK(run(c) == exit_max_iters);
  c.entry = "meanfield_subtree";
  c.params = {{"c", 0.35}};
  c.iters = 200;
  CHECK(run(c) == exit_diverged);
  c.entry = "meanfield_matching";
  c.params = {{"d", 1.0}};
  c.pool = 20000;
  c.tol = 0.01;
  c.out = (d / "ok").string();
  CHECK(run(c) == exit_ok);
  for (const char* f : {"report.json", "pool.csv", "pool.csv.json", "hist.csv"}) CHECK(fs::exists(d / "ok" / f));
  std::string rep = slurp(d / "ok" / "report.json");
  json header = json::parse(rep.substr(0, rep.find('\n')));
  CHECK(header["type"] == "header");
  CHECK(header["config"]["entry"] == "meanfield_matching");
  CHECK(header["config"]["seed"] == 1);
  json side = json::parse(slurp(d / "ok" / "pool.csv.json"));
  CHECK(side["seed_lineage"].size() >= 1);
}

TEST_CASE("artifacts are reproducible and thread independent") {
  fs::path d = scratch("repro");
  RunConfig c;
  c.command = "iterate";
  c.entry = "quicksort";
  c.pool = 5000;
  c.out = (d / "a").string();
  c.threads = 1;
  REQUIRE(run(c) == exit_ok);
  c.out = (d / "b").string();
  c.threads = 3;
  REQUIRE(run(c) == exit_ok);
  CHECK(slurp(d / "a" / "pool.csv") == slurp(d / "b" / "pool.csv"));
  CHECK(slurp(d / "a" / "hist.csv") == slurp(d / "b" / "hist.csv"));
  // The header carries the timestamp and the echoed output path.
  CHECK(without_first_line(slurp(d / "a" / "report.json")) == without_first_line(slurp(d / "b" / "report.json")));
  c.command = "endogeny";
  c.entry = "mod2_shift";
  c.endo_iters = 30;
  c.endo_min = 10;
  c.out = (d / "e1").string();
  REQUIRE(run(c) == exit_ok);
  c.out = (d / "e2").string();
  REQUIRE(run(c) == exit_ok);
  CHECK(without_first_line(slurp(d / "e1" / "endogeny.json")) == without_first_line(slurp(d / "e2" / "endogeny.json")));
  std::string e = slurp(d / "e1" / "endogeny.json");
  CHECK(e.find("non-endogenous-trend") != std::string::npos);
}

TEST_CASE("output directory defaults to the environment") {
  fs::path d = scratch("env");
  setenv("RDE_OUT_DIR", (d / "from_env").string().c_str(), 1);
  CHECK(default_out_dir() == (d / "from_env").string());
  RunConfig c;
  c.command = "iterate";
  c.entry = "lindley";
  c.pool = 1000;
  CHECK(run(c) == exit_ok);
  CHECK(fs::exists(d / "from_env" / "report.json"));
  unsetenv("RDE_OUT_DIR");
  CHECK(default_out_dir() == "rde_out");
}

TEST_CASE("scan and simulate commands") {
  fs::path d = scratch("scan");
  RunConfig c;
  c.command = "scan";
  c.entry = "discounted_brw";
  c.lo = 0.3;
  c.hi = 1.7;
  c.pool = 1000;
  c.iters = 60;
  c.resolution = 0.05;
  c.verdict = "converge";
  c.out = (d / "s").string();
  REQUIRE(run(c) == exit_ok);
  std::string s = slurp(d / "s" / "scan.json");
  CHECK(s.find("\"type\":\"result\"") != std::string::npos);
  c.command = "simulate";
  c.entry = "brw";
  c.params = {{"xi", std::string("pm1:0.9")}};
  c.generations = 60;
  c.cap = 2000;
  c.replicas = 3;
  c.out = (d / "b").string();
  REQUIRE(run(c) == exit_ok);
  std::string body = without_first_line(slurp(d / "b" / "simulate.json"));
  json rec = json::parse(body.substr(0, body.find('\n')));
  CHECK(rec["drift"].get<double>() == doctest::Approx(rec["gamma"].get<double>()).epsilon(0.05));
  c.entry = "nothing";
  CHECK(run(c) == exit_config);
}
