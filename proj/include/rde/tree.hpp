#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "rde/pool.hpp"
#include "rde/spec.hpp"

namespace rde {

using Boundary = std::function<Value(Rng&)>;

struct TreeOptions {
  std::size_t fanout_cap = 32;      // children per node for Poisson-process noise (biased)
  std::size_t node_budget = 10'000'000;
  int max_height = 2000;            // exact sampling recursion guard
};

// Innovations tree cut at depth d. Node innovations are keyed by the hash of the
// node's word, so any two evaluations of the same tree see the same noise.
class TruncatedRtf {
 public:
  TruncatedRtf(int depth, std::uint64_t seed);
  int depth() const { return depth_; }
  std::uint64_t seed() const { return seed_; }
  static std::uint64_t root_key() { return 0x9d2c5680ULL; }
  static std::uint64_t child_key(std::uint64_t parent, std::size_t i);
  NoiseDraw noise(const RdeSpec& spec, std::uint64_t key) const;

 private:
  int depth_;
  std::uint64_t seed_;
};

struct TreeEval {
  Value root;
  std::size_t nodes = 0;
  bool capped = false;  // some node hit the fanout cap
};

// Values at depth d come from `boundary`, then the recursion runs upward.
TreeEval evaluate_root(const TruncatedRtf& tree, const RdeSpec& spec, const Boundary& boundary,
                       std::uint64_t boundary_seed, const TreeOptions& opts = {});

// Exact draw from the unique fixed point on an a.s. finite Galton-Watson tree.
// Returns nullopt when the node budget or height guard is exceeded.
std::optional<Value> exact_sample_finite(const RdeSpec& spec, std::uint64_t seed, const TreeOptions& opts = {});

struct ExactPool {
  SamplePool pool;
  std::size_t discarded = 0;
};
ExactPool exact_sample_pool(const RdeSpec& spec, std::size_t n, std::uint64_t seed, const TreeOptions& opts = {});

enum class ProbeMode { automatic, tree, pooled };

struct ProbeResult {
  double fraction_equal = 0;
  std::size_t trials = 0;
  std::string mode;  // "tree" or "pooled"
  bool capped = false;
};

// Shares one tree's innovations between two boundary conditions and reports
// the fraction of trials whose roots agree within eq_tol (spec.eq_tol if < 0).
// Poisson-process specs default to the pooled bivariate approximation.
ProbeResult cftp_endogeny_probe(const RdeSpec& spec, int depth, const Boundary& a, const Boundary& b,
                                std::size_t trials, std::uint64_t seed, double eq_tol = -1,
                                ProbeMode mode = ProbeMode::automatic, const TreeOptions& opts = {});

}  // namespace rde
