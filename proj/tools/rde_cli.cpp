#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rde/cli.hpp"

using namespace rde;

int main(int argc, char** argv) {
  CLI::App app{"rde: population dynamics for recursive distributional equations"};
  app.require_subcommand(1);

  std::string config_path, entry, out, verdict, fixed, scan_param;
  std::vector<std::string> params;
  std::optional<std::size_t> pool, cap, replicas, steps, samples;
  std::optional<int> iters, threads, bins, grid, generations, endo_iters, endo_min;
  std::optional<double> tol, lo, hi, resolution;
  std::optional<std::uint64_t> seed;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", config_path, "JSON RunConfig; flags override its fields")->check(CLI::ExistingFile);
    s->add_option("--entry", entry, "catalog entry id");
    s->add_option("--param", params, "entry parameter k=v (repeatable)");
    s->add_option("--pool", pool, "pool size");
    s->add_option("--iters", iters, "generation cap");
    s->add_option("--tol", tol, "convergence tolerance (KS between generations)");
    s->add_option("--seed", seed, "master seed");
    s->add_option("--out", out, "output directory (default $RDE_OUT_DIR or rde_out)");
    s->add_option("--threads", threads, "worker cap; results do not depend on it");
    s->add_option("--bins", bins, "histogram bin cap");
  };
  app.add_subcommand("list", "print the catalog");
  auto* it = app.add_subcommand("iterate", "iterate an entry to its fixed point");
  common(it);
  auto* en = app.add_subcommand("endogeny", "bivariate shared-noise iteration from a fixed point");
  common(en);
  en->add_option("--fixed", fixed, "fixed pool source: auto | oracle | iterate");
  en->add_option("--endo-iters", endo_iters, "bivariate generations");
  en->add_option("--endo-min", endo_min, "no verdict before this generation");
  auto* sc = app.add_subcommand("scan", "locate a critical parameter by iteration divergence");
  common(sc);
  sc->add_option("--scan-param", scan_param, "parameter to scan (default: first numeric)");
  sc->add_option("--lo", lo, "bracket low end");
  sc->add_option("--hi", hi, "bracket high end");
  sc->add_option("--grid", grid, "initial grid points");
  sc->add_option("--resolution", resolution, "final bracket width");
  sc->add_option("--verdict", verdict, "horizon | converge");
  auto* si = app.add_subcommand("simulate", "tree simulations: frozen_perc | brw | greedy_brw");
  common(si);
  si->add_option("--generations", generations, "BRW generations");
  si->add_option("--cap", cap, "BRW population cap");
  si->add_option("--replicas", replicas, "BRW replicas");
  si->add_option("--steps", steps, "greedy search steps");
  si->add_option("--samples", samples, "Monte Carlo samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_config;
  }

  RunConfig c;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      c = config_from_json(json::parse(f));
    }
    c.command = app.get_subcommands().front()->get_name();
    if (!entry.empty()) c.entry = entry;
    for (const auto& kv : params) {
      auto [k, v] = parse_param(kv);
      c.params[k] = v;
    }
    if (!out.empty()) c.out = out;
    if (!fixed.empty()) c.fixed = fixed;
    if (!verdict.empty()) c.verdict = verdict;
    if (!scan_param.empty()) c.scan_param = scan_param;
    if (pool) c.pool = *pool;
    if (iters) c.iters = *iters;
    if (tol) c.tol = *tol;
    if (seed) c.seed = *seed;
    if (threads) c.threads = *threads;
    if (bins) c.bins = *bins;
    if (endo_iters) c.endo_iters = *endo_iters;
    if (endo_min) c.endo_min = *endo_min;
    if (lo) c.lo = *lo;
    if (hi) c.hi = *hi;
    if (grid) c.grid = *grid;
    if (resolution) c.resolution = *resolution;
    if (generations) c.generations = *generations;
    if (cap) c.cap = *cap;
    if (replicas) c.replicas = *replicas;
    if (steps) c.steps = *steps;
    if (samples) c.samples = *samples;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  try {
    return run_command(c, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
