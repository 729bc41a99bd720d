#pragma once

#include <string>

#include <json.hpp>

#include "rde/analysis.hpp"
#include "rde/engine.hpp"
#include "rde/pool.hpp"

namespace rde {

using json = nlohmann::ordered_json;

// Non-finite doubles become the strings "inf", "-inf", "nan".
json num_json(double x);
json value_json(const Value& v);
json stats_json(const PoolStats& s);
json report_json_lines(const IterationReport& r);  // array of generation records plus summary
json scan_json(const ScanResult& r);

struct PoolDescriptor {
  std::string state;
  int dim = 1;
  std::uint64_t generation = 0;
  std::vector<std::uint64_t> lineage;
  std::size_t size = 0;
};
PoolDescriptor describe(const SamplePool& p, const std::string& state);

// One value per line ("inf" for the sentinel, vectors comma separated), plus
// a sidecar <path>.json with the descriptor.
void write_pool_csv(const std::string& path, const SamplePool& pool, const std::string& state);
SamplePool read_pool_csv(const std::string& path);

// Little-endian binary: magic, count, dim, then per value dim doubles and a flag byte.
void write_pool_binary(const std::string& path, const SamplePool& pool, const std::string& state);
SamplePool read_pool_binary(const std::string& path);

struct Histogram {
  std::vector<double> lo, hi;
  std::vector<std::size_t> count;
  std::size_t inf_count = 0;
};
// Freedman-Diaconis bins over the finite values of a scalar pool.
Histogram histogram(const SamplePool& pool, int max_bins = 2000);
void write_histogram_csv(const std::string& path, const Histogram& h);

// JSON lines: a header (timestamp and config), the records, a summary.
void write_report(const std::string& path, const json& config, const IterationReport& r);
void write_jsonl(const std::string& path, const json& config, const std::vector<json>& records);

}  // namespace rde
