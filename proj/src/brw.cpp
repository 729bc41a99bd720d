#include "rde/brw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "rde/roots.hpp"
#include "rde/rng.hpp"

namespace rde {

double BrwSpec::m(double theta) const {
  double lm = displacement.log_mgf ? displacement.log_mgf(theta) : std::numeric_limits<double>::infinity();
  return offspring.mean * std::exp(lm);
}

double BrwSpec::gamma() const {
  auto f = [this](double t) {
    double v = m(t);
    return std::isfinite(v) && v > 0 ? std::log(v) / t : std::numeric_limits<double>::infinity();
  };
  double best = std::numeric_limits<double>::infinity();
  // Coarse log grid then Brent refinement around the best point.
  double tbest = 1;
  for (double t = 1e-3; t <= 200; t *= 1.1) {
    double v = f(t);
    if (v < best) {
      best = v;
      tbest = t;
    }
  }
  if (std::isfinite(best)) {
    auto r = minimize(f, tbest / 1.1, tbest * 1.1);
    best = std::min(best, r.second);
  }
  // As theta grows, log m(theta)/theta tends to ess sup xi when E N is finite.
  if (offspring.mean > 0 && std::isfinite(offspring.mean)) best = std::min(best, displacement.hi);
  return best;
}

bool BrwSpec::moment_condition() const {
  for (double t = 1e-3; t <= 50; t *= 2)
    if (std::isfinite(m(t))) return true;
  return false;
}

BrwSpec make_brw(const std::string& offspring, const std::string& displacement) {
  BrwSpec s;
  s.offspring = parse_law(offspring);
  s.displacement = parse_law(displacement);
  if (!s.offspring.integer) throw std::invalid_argument("offspring law must be integer valued");
  return s;
}

BrwTrack simulate_brw(const BrwSpec& spec, int generations, std::size_t population_cap, std::uint64_t seed,
                      int k_report) {
  if (generations < 1) throw std::invalid_argument("simulate_brw: generations must be >= 1");
  if (population_cap < std::size_t(std::max(k_report, 1)))
    throw std::invalid_argument("simulate_brw: cap smaller than reported order statistics");
  Rng rng(mix_keys({seed, 0xb5ULL}));
  std::vector<double> beam{0.0}, next;
  double population = 1;
  BrwTrack tr;
  for (int n = 1; n <= generations; ++n) {
    next.clear();
    double total_children = 0;
    for (double x : beam) {
      auto k = std::size_t(spec.offspring.sample(rng));
      total_children += double(k);
      for (std::size_t i = 0; i < k; ++i) next.push_back(x + spec.displacement.sample(rng));
    }
    // Scale the beam's offspring count to the full population.
    population = beam.empty() ? 0 : population * total_children / double(beam.size());
    if (next.empty()) {
      tr.extinct_at = n;
      break;
    }
    bool hit = false;
    if (next.size() > population_cap) {
      std::nth_element(next.begin(), next.begin() + std::ptrdiff_t(population_cap), next.end(), std::greater<>());
      next.resize(population_cap);
      hit = true;
    }
    std::vector<double> top(next);
    std::size_t k = std::min<std::size_t>(std::size_t(k_report), top.size());
    std::partial_sort(top.begin(), top.begin() + std::ptrdiff_t(k), top.end(), std::greater<>());
    top.resize(k);
    tr.rightmost.push_back(top.front());
    tr.top.push_back(std::move(top));
    tr.population.push_back(population);
    tr.cap_hit.push_back(hit);
    beam.swap(next);
  }
  return tr;
}

BrwEnsemble brw_replicas(const BrwSpec& spec, int generations, std::size_t population_cap, std::size_t replicas,
                         std::uint64_t seed) {
  std::vector<BrwTrack> runs(replicas);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < std::int64_t(replicas); ++r)
    runs[r] = simulate_brw(spec, generations, population_cap, mix_keys({seed, std::uint64_t(r)}), 1);
  BrwEnsemble e;
  e.replicas = replicas;
  for (const auto& t : runs) {
    if (t.extinct_at >= 0) ++e.extinct;
    for (auto h : t.cap_hit) e.cap_hits += h;
  }
  for (int n = 0; n < generations; ++n) {
    std::vector<double> xs;
    for (const auto& t : runs)
      if (std::size_t(n) < t.rightmost.size() && t.extinct_at < 0) xs.push_back(t.rightmost[n]);
    if (xs.empty()) break;
    std::sort(xs.begin(), xs.end());
    auto q = [&](double p) { return xs[std::min(xs.size() - 1, std::size_t(p * double(xs.size())))]; };
    e.median.push_back(q(0.5));
    e.q25.push_back(q(0.25));
    e.q75.push_back(q(0.75));
  }
  return e;
}

double brw_range_sample(const BrwSpec& spec, int horizon, std::size_t population_cap, std::uint64_t seed) {
  auto t = simulate_brw(spec, horizon, population_cap, seed, 1);
  double best = 0;
  for (double r : t.rightmost) best = std::max(best, r);
  return best;
}

GreedyResult greedy_brw(const BrwSpec& spec, std::size_t steps, std::uint64_t seed) {
  struct Item {
    double pos;
    std::uint64_t order;
  };
  // Rightmost first; among equal positions the earlier-discovered one.
  auto cmp = [](const Item& a, const Item& b) { return a.pos < b.pos || (a.pos == b.pos && a.order > b.order); };
  std::priority_queue<Item, std::vector<Item>, decltype(cmp)> frontier(cmp);
  Rng rng(mix_keys({seed, 0x9eedULL}));
  std::uint64_t order = 0;
  frontier.push({0.0, order++});
  if (spec.offspring.lo != 2 || spec.offspring.hi != 2)
    throw std::invalid_argument("greedy_brw: needs a binary BRW (offspring const:2)");
  GreedyResult g;
  g.leftmost = 0;
  std::size_t next_cp = 1;
  for (std::size_t n = 1; n <= steps; ++n) {
    if (frontier.empty()) break;
    Item it = frontier.top();
    frontier.pop();
    g.leftmost = std::min(g.leftmost, it.pos);
    g.speed = it.pos / double(n);
    for (int c = 0; c < 2; ++c) frontier.push({it.pos + spec.displacement.sample(rng), order++});
    if (n == next_cp || n == steps) {
      g.checkpoints.push_back(n);
      g.speed_track.push_back(g.speed);
      if (n == next_cp) next_cp *= 2;
    }
  }
  return g;
}

}  // namespace rde
