#include "rde/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rde/analysis.hpp"
#include "rde/brw.hpp"
#include "rde/engine.hpp"
#include "rde/frozen.hpp"

namespace rde {

namespace {

namespace fs = std::filesystem;

json params_json(const Params& p) {
  json j = json::object();
  for (const auto& [k, v] : p) {
    if (std::holds_alternative<double>(v))
      j[k] = num_json(std::get<double>(v));
    else
      j[k] = std::get<std::string>(v);
  }
  return j;
}

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

std::string out_dir(const RunConfig& c) {
  std::string d = c.out.empty() ? default_out_dir() : c.out;
  fs::create_directories(d);
  return d;
}

void set_threads(const RunConfig& c) {
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#else
  (void)c;
#endif
}

IterateConfig iterate_config(const RunConfig& c) {
  if (c.iters < 1) throw std::invalid_argument("iters must be >= 1");
  if (!(c.tol > 0)) throw std::invalid_argument("tol must be positive");
  IterateConfig ic;
  ic.max_iters = c.iters;
  ic.tol = c.tol;
  ic.seed = c.seed;
  return ic;
}

void check_pool(const RunConfig& c) {
  if (c.pool < 2) throw std::invalid_argument("pool must be >= 2");
}

int exit_for(StopReason r) {
  switch (r) {
    case StopReason::converged: return exit_ok;
    case StopReason::diverged: return exit_diverged;
    case StopReason::max_iters: return exit_max_iters;
  }
  return exit_ok;
}

// Resolved params merged into the echoed config.
json resolved_config(const RunConfig& c, const Params& resolved) {
  json j = config_json(c);
  j["params"] = params_json(resolved);
  return j;
}

std::string law_or(const Params& p, const std::string& key, const std::string& dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  if (!std::holds_alternative<std::string>(it->second))
    throw std::invalid_argument("param " + key + " must be a law such as normal:0:1");
  return std::get<std::string>(it->second);
}

double num_or(const Params& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  if (!std::holds_alternative<double>(it->second)) throw std::invalid_argument("param " + key + " must be numeric");
  return std::get<double>(it->second);
}

}  // namespace

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["entry"] = c.entry;
  j["params"] = params_json(c.params);
  j["pool"] = c.pool;
  j["iters"] = c.iters;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["threads"] = c.threads;
  j["bins"] = c.bins;
  j["fixed"] = c.fixed;
  j["endo_iters"] = c.endo_iters;
  j["endo_min"] = c.endo_min;
  j["scan_param"] = c.scan_param;
  j["lo"] = c.lo ? json(*c.lo) : json();
  j["hi"] = c.hi ? json(*c.hi) : json();
  j["grid"] = c.grid;
  j["resolution"] = c.resolution;
  j["verdict"] = c.verdict;
  j["generations"] = c.generations;
  j["cap"] = c.cap;
  j["replicas"] = c.replicas;
  j["steps"] = c.steps;
  j["samples"] = c.samples;
  return j;
}

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const char* known[] = {"command", "entry",      "params",     "pool",     "iters",   "tol",
                                "seed",    "out",        "threads",    "bins",     "fixed",   "endo_iters",
                                "endo_min", "scan_param", "lo",        "hi",       "grid",    "resolution",
                                "verdict", "generations", "cap",       "replicas", "steps",   "samples"};
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* n : known) ok = ok || k == n;
    if (!ok) throw std::invalid_argument("unknown config field '" + k + "'");
  }
  try {
    take(j, "command", c.command);
    take(j, "entry", c.entry);
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) {
        if (v.is_number())
          c.params[k] = v.get<double>();
        else if (v.is_string())
          c.params[k] = v.get<std::string>();
        else
          throw std::invalid_argument("param " + k + " must be a number or string");
      }
    }
    take(j, "pool", c.pool);
    take(j, "iters", c.iters);
    take(j, "tol", c.tol);
    take(j, "seed", c.seed);
    take(j, "out", c.out);
    take(j, "threads", c.threads);
    take(j, "bins", c.bins);
    take(j, "fixed", c.fixed);
    take(j, "endo_iters", c.endo_iters);
    take(j, "endo_min", c.endo_min);
    take(j, "scan_param", c.scan_param);
    if (j.contains("lo") && !j.at("lo").is_null()) c.lo = j.at("lo").get<double>();
    if (j.contains("hi") && !j.at("hi").is_null()) c.hi = j.at("hi").get<double>();
    take(j, "grid", c.grid);
    take(j, "resolution", c.resolution);
    take(j, "verdict", c.verdict);
    take(j, "generations", c.generations);
    take(j, "cap", c.cap);
    take(j, "replicas", c.replicas);
    take(j, "steps", c.steps);
    take(j, "samples", c.samples);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config: ") + e.what());
  }
  return c;
}

std::pair<std::string, ParamValue> parse_param(const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("param '" + kv + "' is not k=v");
  std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
  if (v.empty()) throw std::invalid_argument("param '" + k + "' has an empty value");
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end && *end == '\0') return {k, x};
  return {k, v};
}

std::string default_out_dir() {
  const char* e = std::getenv("RDE_OUT_DIR");
  return e && *e ? e : "rde_out";
}

int cmd_list(std::ostream& log) {
  for (const auto& e : registry()) {
    log << e.id << "  [" << e.state << "]  oracle=" << to_string(e.oracle_kind) << "\n    " << e.anchor << "\n";
    for (const auto& p : e.params) {
      log << "      " << p.name << " = ";
      if (std::holds_alternative<double>(p.dflt))
        log << std::get<double>(p.dflt);
      else
        log << std::get<std::string>(p.dflt);
      log << "  (" << p.doc << ")\n";
    }
  }
  log << registry().size() << " entries\n";
  return exit_ok;
}

int cmd_iterate(const RunConfig& c, std::ostream& log) {
  const auto& e = find_entry(c.entry);
  Params prm = resolve_params(e, c.params);
  check_pool(c);
  IterateConfig ic = iterate_config(c);
  set_threads(c);
  RdeSpec spec = build_spec(c.entry, prm);
  SamplePool init = default_init(c.entry, prm, c.pool, mix_keys({c.seed, 0x1417}));
  auto [pool, rep] = iterate(spec, std::move(init), ic);

  std::string dir = out_dir(c);
  json cfg = resolved_config(c, prm);
  write_report(dir + "/report.json", cfg, rep);
  write_pool_csv(dir + "/pool.csv", pool, e.state);
  if (pool.dim() == 1) write_histogram_csv(dir + "/hist.csv", histogram(pool, c.bins));

  PoolStats st = pool.stats();
  log << c.entry << ": " << to_string(rep.stop_reason) << " after " << rep.records.size() << " generations";
  if (!rep.detail.empty()) log << " (" << rep.detail << ")";
  log << "\n  mean " << st.mean << "  variance " << st.variance << "  median " << st.median << "  P(inf) "
      << st.frac_inf << "\n  artifacts in " << dir << "\n";
  return exit_for(rep.stop_reason);
}

int cmd_endogeny(const RunConfig& c, std::ostream& log) {
  const auto& e = find_entry(c.entry);
  Params prm = resolve_params(e, c.params);
  check_pool(c);
  IterateConfig ic = iterate_config(c);
  if (c.fixed != "auto" && c.fixed != "oracle" && c.fixed != "iterate")
    throw std::invalid_argument("fixed must be auto, oracle or iterate");
  if (c.endo_iters < 1 || c.endo_min < 0) throw std::invalid_argument("bad endogeny generation counts");
  set_threads(c);
  RdeSpec spec = build_spec(c.entry, prm);
  Oracle o = oracle(c.entry, prm);

  std::string dir = out_dir(c);
  json cfg = resolved_config(c, prm);
  SamplePool fixed;
  std::string source;
  if (c.fixed == "oracle" || (c.fixed == "auto" && o.sampler)) {
    if (!o.sampler) throw std::invalid_argument(c.entry + " has no oracle sampler");
    fixed = SamplePool::sample(c.pool, o.sampler, mix_keys({c.seed, 0x0fac}));
    source = "oracle";
  } else {
    auto [pool, rep] = iterate(spec, default_init(c.entry, prm, c.pool, mix_keys({c.seed, 0x1417})), ic);
    write_report(dir + "/report.json", cfg, rep);
    if (rep.stop_reason == StopReason::diverged) {
      log << c.entry << ": marginal iteration diverged; no endogeny test\n";
      return exit_diverged;
    }
    fixed = std::move(pool);
    source = "iterate";
  }

  EndogenyConfig ec;
  ec.max_iters = c.endo_iters;
  ec.min_iters = std::min(c.endo_min, c.endo_iters);
  ec.seed = mix_keys({c.seed, 0xe4d0});
  EndogenyReport er = endogeny_iterate(spec, fixed, ec);

  std::vector<json> recs;
  for (const auto& g : er.gaps)
    recs.push_back({{"type", "gap"},
                    {"generation", g.generation},
                    {"raw", num_json(g.raw)},
                    {"normalized", num_json(g.normalized)},
                    {"degenerate", g.degenerate}});
  double last = er.gaps.empty() ? 0 : er.gaps.back().normalized;
  recs.push_back({{"type", "verdict"},
                  {"verdict", to_string(er.verdict)},
                  {"final_normalized_gap", num_json(last)},
                  {"fixed_source", source},
                  {"generations", er.gaps.empty() ? 0 : er.gaps.back().generation}});
  write_jsonl(dir + "/endogeny.json", cfg, recs);
  log << c.entry << ": " << to_string(er.verdict) << "  normalized gap " << last << " (fixed pool from " << source
      << ")\n  artifacts in " << dir << "\n";
  return exit_ok;
}

int cmd_scan(const RunConfig& c, std::ostream& log) {
  const auto& e = find_entry(c.entry);
  check_pool(c);
  std::string key = c.scan_param;
  const ParamDef* def = nullptr;
  for (const auto& p : e.params) {
    if (!std::holds_alternative<double>(p.dflt)) continue;
    if (key.empty() || p.name == key) {
      def = &p;
      break;
    }
  }
  if (!def) throw std::invalid_argument("no numeric parameter to scan on " + c.entry);
  key = def->name;
  double lo = c.lo.value_or(def->lo), hi = c.hi.value_or(def->hi);
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi) || std::abs(hi - lo) > 1e6)
    throw std::invalid_argument("scan needs a finite bracket lo < hi");
  if (c.verdict != "horizon" && c.verdict != "converge") throw std::invalid_argument("verdict must be horizon or converge");
  if (c.grid < 2 || !(c.resolution > 0)) throw std::invalid_argument("bad grid or resolution");
  resolve_params(e, c.params);
  set_threads(c);

  ScanConfig sc;
  sc.grid_points = c.grid;
  sc.resolution = c.resolution;
  sc.n_pool = c.pool;
  sc.iter = iterate_config(c);
  if (c.verdict == "horizon") {
    sc.iter.tol = 1e-12;
    sc.max_iters_is_divergence = false;
  }
  Params base = c.params;
  auto at = [&](double x) {
    Params p = base;
    p[key] = x;
    return resolve_params(e, p);
  };
  Family fam = [&](double x) { return build_spec(c.entry, at(x)); };
  InitFn init = [&](double x, std::size_t n, std::uint64_t s) { return default_init(c.entry, at(x), n, s); };
  ScanResult r = critical_scan(fam, init, lo, hi, sc);

  std::string dir = out_dir(c);
  json cfg = config_json(c);
  cfg["scan_param"] = key;
  cfg["lo"] = lo;
  cfg["hi"] = hi;
  json body = scan_json(r);
  std::vector<json> recs;
  for (auto& p : body["points"]) {
    json rec = {{"type", "point"}};
    rec.update(p);
    recs.push_back(rec);
  }
  body.erase("points");
  json res = {{"type", "result"}, {"param", key}};
  res.update(body);
  recs.push_back(res);
  write_jsonl(dir + "/scan.json", cfg, recs);
  log << c.entry << ": critical " << key << " ~ " << r.estimate << "  bracket [" << r.bracket_lo << ", "
      << r.bracket_hi << "]" << (r.consistent ? "" : "  (grid verdicts cleaned)") << "\n  artifacts in " << dir
      << "\n";
  return exit_ok;
}

int cmd_simulate(const RunConfig& c, std::ostream& log) {
  set_threads(c);
  std::string dir = out_dir(c);
  json cfg = config_json(c);
  std::vector<json> recs;
  const std::uint64_t seed = mix_keys({c.seed, 0x5107});

  if (c.entry == "frozen_perc") {
    check_pool(c);
    IterateConfig ic = iterate_config(c);
    ic.tol = std::min(ic.tol, 0.003);  // the local-stats precheck needs a tight fixed point
    Params prm = resolve_params(find_entry("frozen_perc"), c.params);
    auto [pool, rep] = iterate(build_spec("frozen_perc", prm), default_init("frozen_perc", prm, c.pool, seed), ic);
    if (rep.stop_reason == StopReason::diverged) throw std::runtime_error("frozen_perc iteration diverged");
    FrozenStats st = frozen_perc_local_stats(pool, c.samples, mix_keys({seed, 1}));
    json z = json::array();
    for (std::size_t b = 0; b < st.z_count.size(); ++b)
      z.push_back({{"lo", st.z_lo[b]}, {"hi", st.z_hi[b]}, {"count", st.z_count[b]}, {"density", st.z_density[b]}});
    recs.push_back({{"type", "frozen_stats"},
                    {"p_edge_inf", st.p_edge_inf},
                    {"p_edge_fin", st.p_edge_fin},
                    {"p_edge_out", st.p_edge_out},
                    {"p_vertex_inf", st.p_vertex_inf},
                    {"p_vertex_fin", st.p_vertex_fin},
                    {"p_vertex_out", st.p_vertex_out},
                    {"n", st.n},
                    {"precheck_ks", st.precheck_ks},
                    {"fixed_generations", rep.records.size()},
                    {"z_bins", z}});
    log << "frozen_perc: edges inf/fin/out " << st.p_edge_inf << " " << st.p_edge_fin << " " << st.p_edge_out
        << "  vertices " << st.p_vertex_inf << " " << st.p_vertex_fin << " " << st.p_vertex_out << "\n";
  } else if (c.entry == "brw") {
    BrwSpec b = make_brw(law_or(c.params, "N", "const:2"), law_or(c.params, "xi", "bernoulli:0.9"));
    if (c.generations < 2) throw std::invalid_argument("generations must be >= 2");
    BrwEnsemble en = brw_replicas(b, c.generations, c.cap, c.replicas, seed);
    const int n = c.generations, h = n / 2;
    double drift = en.median.empty() ? NAN : en.median.back() / n;
    double slope = en.median.size() == std::size_t(n) ? (en.median[n - 1] - en.median[h - 1]) / (n - h) : NAN;
    json track = json::array();
    for (std::size_t i = 0; i < en.median.size(); ++i)
      track.push_back({{"n", i + 1}, {"median", en.median[i]}, {"q25", en.q25[i]}, {"q75", en.q75[i]}});
    recs.push_back({{"type", "brw"},
                    {"offspring", b.offspring.text},
                    {"displacement", b.displacement.text},
                    {"gamma", num_json(b.gamma())},
                    {"drift", num_json(drift)},
                    {"late_slope", num_json(slope)},
                    {"replicas", en.replicas},
                    {"extinct", en.extinct},
                    {"cap_hits", en.cap_hits},
                    {"track", track}});
    log << "brw: drift R_n/n " << drift << "  late slope " << slope << "  gamma " << b.gamma() << "\n";
  } else if (c.entry == "greedy_brw") {
    std::string xi = law_or(c.params, "xi", "pm1:0.3");
    BrwSpec b = make_brw("const:2", xi);
    GreedyResult g = greedy_brw(b, c.steps, seed);
    json track = json::array();
    for (std::size_t i = 0; i < g.checkpoints.size(); ++i)
      track.push_back({{"step", g.checkpoints[i]}, {"speed", g.speed_track[i]}});
    json rec = {{"type", "greedy"}, {"displacement", xi}, {"speed", g.speed}, {"leftmost", g.leftmost}, {"track", track}};
    if (num_or(c.params, "with_L", 1) != 0) {
      check_pool(c);
      Params prm = resolve_params(find_entry("brw_greedy_L"), {{"xi", xi}});
      IterateConfig ic = iterate_config(c);
      auto [L, rep] = iterate(build_spec("brw_greedy_L", prm), default_init("brw_greedy_L", prm, c.pool, seed), ic);
      rec["L_stop_reason"] = to_string(rep.stop_reason);
      rec["L_zero_mass"] = [&] {
        std::size_t z = 0;
        for (const auto& v : L.values()) z += v[0] == 0.0;
        return double(z) / double(L.size());
      }();
      rec["speed_from_L"] = speed_from_L(L, xi, c.samples, mix_keys({seed, 2}), 1);
      rec["speed_from_L_two_children"] = speed_from_L(L, xi, c.samples, mix_keys({seed, 2}), 2);
    }
    recs.push_back(rec);
    log << "greedy_brw: speed " << g.speed << "\n";
  } else {
    throw std::invalid_argument("simulate: entry must be frozen_perc, brw or greedy_brw");
  }
  write_jsonl(dir + "/simulate.json", cfg, recs);
  log << "  artifacts in " << dir << "\n";
  return exit_ok;
}

int run_command(const RunConfig& c, std::ostream& log, std::ostream& err) {
  try {
    if (c.command == "list") return cmd_list(log);
    if (c.entry.empty()) throw std::invalid_argument("--entry is required");
    if (c.command == "iterate") return cmd_iterate(c, log);
    if (c.command == "endogeny") return cmd_endogeny(c, log);
    if (c.command == "scan") return cmd_scan(c, log);
    if (c.command == "simulate") return cmd_simulate(c, log);
    throw std::invalid_argument("unknown command '" + c.command + "'");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  }
}

}  // namespace rde
