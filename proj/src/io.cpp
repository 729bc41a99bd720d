#include "rde/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rde {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double parse_token(const std::string& t) {
  std::size_t used = 0;
  double x = std::stod(t, &used);
  if (used != t.size()) throw std::runtime_error("bad number '" + t + "'");
  return x;
}

constexpr char kMagic[8] = {'R', 'D', 'E', 'P', 'O', 'O', 'L', '1'};

}  // namespace

json num_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json value_json(const Value& v) {
  if (v.is_inf()) return "inf";
  if (v.dim() == 1) return num_json(v[0]);
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(num_json(v[i]));
  return a;
}

json stats_json(const PoolStats& s) {
  json q = json::array();
  for (double x : s.quantiles) q.push_back(num_json(x));
  return {{"mean", num_json(s.mean)},     {"variance", num_json(s.variance)}, {"median", num_json(s.median)},
          {"quantiles", q},               {"frac_inf", s.frac_inf},           {"min", num_json(s.min)},
          {"max", num_json(s.max)}};
}

json report_json_lines(const IterationReport& r) {
  json out = json::array();
  for (const auto& g : r.records)
    out.push_back({{"type", "generation"},
                   {"generation", g.generation},
                   {"distance", num_json(g.distance)},
                   {"stats", stats_json(g.stats)},
                   {"cap_hits", g.cap_hits}});
  out.push_back({{"type", "summary"},
                 {"stop_reason", to_string(r.stop_reason)},
                 {"generations", r.records.size()},
                 {"detail", r.detail}});
  return out;
}

json scan_json(const ScanResult& r) {
  json pts = json::array();
  for (const auto& p : r.points) {
    json last = p.report.records.empty() ? json() : stats_json(p.report.records.back().stats);
    pts.push_back({{"param", p.param},
                   {"verdict", p.converged ? "converged" : "diverged"},
                   {"stop_reason", to_string(p.reason)},
                   {"generations", p.report.records.size()},
                   {"cleaned", p.cleaned},
                   {"final_stats", last}});
  }
  return {{"estimate", r.estimate},
          {"bracket", {r.bracket_lo, r.bracket_hi}},
          {"bracket_width", r.bracket_hi - r.bracket_lo},
          {"consistent", r.consistent},
          {"flips", r.flips},
          {"points", pts}};
}

PoolDescriptor describe(const SamplePool& p, const std::string& state) {
  return {state, p.dim(), p.generation(), p.lineage(), p.size()};
}

static json descriptor_json(const PoolDescriptor& d) {
  return {{"state", d.state}, {"dim", d.dim}, {"generation", d.generation}, {"seed_lineage", d.lineage}, {"size", d.size}};
}

void write_pool_csv(const std::string& path, const SamplePool& pool, const std::string& state) {
  auto f = open_out(path);
  for (const auto& v : pool.values()) {
    if (v.is_inf()) {
      f << "inf\n";
      continue;
    }
    for (int i = 0; i < v.dim(); ++i) f << (i ? "," : "") << fmt(v[i]);
    f << '\n';
  }
  auto s = open_out(path + ".json");
  s << descriptor_json(describe(pool, state)).dump(2) << '\n';
}

SamplePool read_pool_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::vector<Value> vals;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line == "inf") {
      vals.push_back(Value::infinity());
      continue;
    }
    std::vector<double> xs;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) xs.push_back(parse_token(tok));
    if (xs.size() == 1) vals.emplace_back(xs[0]);
    else if (xs.size() == 2) vals.push_back(Value::vec2(xs[0], xs[1]));
    else if (xs.size() == 3) vals.push_back(Value::vec3(xs[0], xs[1], xs[2]));
    else throw std::runtime_error("bad pool line '" + line + "'");
  }
  std::uint64_t gen = 0;
  std::vector<std::uint64_t> lineage;
  std::ifstream side(path + ".json");
  if (side) {
    json d = json::parse(side);
    gen = d.value("generation", std::uint64_t(0));
    lineage = d.value("seed_lineage", std::vector<std::uint64_t>{});
  }
  return SamplePool(std::move(vals), gen, std::move(lineage));
}

void write_pool_binary(const std::string& path, const SamplePool& pool, const std::string& state) {
  auto f = open_out(path, true);
  f.write(kMagic, 8);
  std::uint64_t n = pool.size();
  std::uint32_t dim = std::uint32_t(pool.dim());
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(&dim), 4);
  for (const auto& v : pool.values()) {
    for (std::uint32_t i = 0; i < dim; ++i) {
      double x = v[int(i)];
      f.write(reinterpret_cast<const char*>(&x), 8);
    }
    char flag = v.is_inf() ? 1 : 0;
    f.write(&flag, 1);
  }
  auto s = open_out(path + ".json");
  s << descriptor_json(describe(pool, state)).dump(2) << '\n';
}

SamplePool read_pool_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error(path + ": not a pool file");
  std::uint64_t n;
  std::uint32_t dim;
  f.read(reinterpret_cast<char*>(&n), 8);
  f.read(reinterpret_cast<char*>(&dim), 4);
  if (!f || dim < 1 || dim > 3) throw std::runtime_error(path + ": bad header");
  std::vector<Value> vals;
  vals.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    double x[3] = {0, 0, 0};
    for (std::uint32_t i = 0; i < dim; ++i) f.read(reinterpret_cast<char*>(&x[i]), 8);
    char flag;
    f.read(&flag, 1);
    if (!f) throw std::runtime_error(path + ": truncated");
    if (flag) vals.push_back(Value::infinity());
    else if (dim == 1) vals.emplace_back(x[0]);
    else if (dim == 2) vals.push_back(Value::vec2(x[0], x[1]));
    else vals.push_back(Value::vec3(x[0], x[1], x[2]));
  }
  std::uint64_t gen = 0;
  std::vector<std::uint64_t> lineage;
  std::ifstream side(path + ".json");
  if (side) {
    json d = json::parse(side);
    gen = d.value("generation", std::uint64_t(0));
    lineage = d.value("seed_lineage", std::vector<std::uint64_t>{});
  }
  return SamplePool(std::move(vals), gen, std::move(lineage));
}

Histogram histogram(const SamplePool& pool, int max_bins) {
  if (pool.dim() != 1) throw std::invalid_argument("histogram: scalar pools only");
  Histogram h;
  std::vector<double> xs;
  for (const auto& v : pool.values()) {
    if (v.is_inf()) ++h.inf_count;
    else xs.push_back(v[0]);
  }
  if (xs.empty()) return h;
  std::sort(xs.begin(), xs.end());
  auto q = [&](double p) { return xs[std::min(xs.size() - 1, std::size_t(p * double(xs.size())))]; };
  const double lo = xs.front(), hi = xs.back();
  double width = 2 * (q(0.75) - q(0.25)) / std::cbrt(double(xs.size()));
  int bins;
  if (hi == lo) {
    bins = 1;
  } else {
    if (!(width > 0)) width = (hi - lo) / std::max(1.0, std::sqrt(double(xs.size())));
    bins = std::clamp(int(std::ceil((hi - lo) / width)), 1, max_bins);
  }
  const double w = hi == lo ? 1.0 : (hi - lo) / bins;
  h.count.assign(std::size_t(bins), 0);
  for (int b = 0; b < bins; ++b) {
    h.lo.push_back(lo + b * w);
    h.hi.push_back(b + 1 == bins ? (hi == lo ? lo + 1.0 : hi) : lo + (b + 1) * w);
  }
  for (double x : xs) {
    int b = hi == lo ? 0 : std::min(bins - 1, int((x - lo) / w));
    ++h.count[std::size_t(b)];
  }
  return h;
}

void write_histogram_csv(const std::string& path, const Histogram& h) {
  auto f = open_out(path);
  f << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < h.count.size(); ++b) f << fmt(h.lo[b]) << ',' << fmt(h.hi[b]) << ',' << h.count[b] << '\n';
  if (h.inf_count) f << "inf,inf," << h.inf_count << '\n';
}

void write_jsonl(const std::string& path, const json& config, const std::vector<json>& records) {
  auto f = open_out(path);
  f << json{{"type", "header"}, {"timestamp", timestamp()}, {"config", config}}.dump() << '\n';
  for (const auto& r : records) f << r.dump() << '\n';
}

void write_report(const std::string& path, const json& config, const IterationReport& r) {
  json lines = report_json_lines(r);
  write_jsonl(path, config, std::vector<json>(lines.begin(), lines.end()));
}

}  // namespace rde
