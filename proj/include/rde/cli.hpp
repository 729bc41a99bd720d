#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "rde/catalog.hpp"
#include "rde/io.hpp"

namespace rde {

// Everything needed to reproduce a command run.
struct RunConfig {
  std::string command;
  std::string entry;
  Params params;
  std::size_t pool = 100000;
  int iters = 200;
  double tol = 0.01;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;   // 0: library default
  int bins = 2000;   // histogram bin cap

  // endogeny
  std::string fixed = "auto";  // auto | oracle | iterate
  int endo_iters = 150;
  int endo_min = 50;

  // scan
  std::string scan_param;      // defaults to the entry's first numeric parameter
  std::optional<double> lo, hi;
  int grid = 5;
  double resolution = 0.01;
  std::string verdict = "horizon";  // horizon: run all iters, only divergence counts | converge

  // simulate
  int generations = 200;
  std::size_t cap = 100000;
  std::size_t replicas = 20;
  std::size_t steps = 1 << 20;
  std::size_t samples = 1000000;
};

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_diverged = 2, exit_max_iters = 3 };

json config_json(const RunConfig& c);
// Fields missing from j keep their values in base. Throws std::invalid_argument.
RunConfig config_from_json(const json& j, RunConfig base = {});
// "k=v"; numeric when v parses fully as a number.
std::pair<std::string, ParamValue> parse_param(const std::string& kv);
// RDE_OUT_DIR, else "rde_out".
std::string default_out_dir();

// Each writes its artifacts under c.out and a summary to log.
int cmd_list(std::ostream& log);
int cmd_iterate(const RunConfig& c, std::ostream& log);
int cmd_endogeny(const RunConfig& c, std::ostream& log);
int cmd_scan(const RunConfig& c, std::ostream& log);
int cmd_simulate(const RunConfig& c, std::ostream& log);

// Dispatch on c.command; config errors map to exit_config with a message on err.
int run_command(const RunConfig& c, std::ostream& log, std::ostream& err);

}  // namespace rde
