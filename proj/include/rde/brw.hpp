#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rde/laws.hpp"

namespace rde {

// Branching random walk with i.i.d. displacements (IBRW).
struct BrwSpec {
  Law offspring;
  Law displacement;
  bool independent = true;

  // m(theta) = E sum_i exp(theta xi_i)
  double m(double theta) const;
  // inf over theta > 0 of log m(theta) / theta, including the theta -> inf limit.
  double gamma() const;
  bool moment_condition() const;
};

BrwSpec make_brw(const std::string& offspring, const std::string& displacement);

struct BrwTrack {
  std::vector<double> rightmost;               // R_n, n = 1..generations
  std::vector<std::vector<double>> top;        // R_{n,k}, k = 1..K (descending)
  std::vector<double> population;              // true generation size (floating count)
  std::vector<std::uint8_t> cap_hit;           // beam truncated candidates that generation
  int extinct_at = -1;
};

BrwTrack simulate_brw(const BrwSpec& spec, int generations, std::size_t population_cap, std::uint64_t seed,
                      int k_report = 5);

struct BrwEnsemble {
  std::vector<double> median, q25, q75;  // of R_n over replicas (surviving ones)
  std::size_t replicas = 0, extinct = 0, cap_hits = 0;
};
BrwEnsemble brw_replicas(const BrwSpec& spec, int generations, std::size_t population_cap, std::size_t replicas,
                         std::uint64_t seed);

// max(0, sup_n R_n) up to a horizon; the reference law for the range recursion.
double brw_range_sample(const BrwSpec& spec, int horizon, std::size_t population_cap, std::uint64_t seed);

struct GreedyResult {
  double speed = 0;                   // Q_{v_n} / n at the last step
  std::vector<double> speed_track;    // at powers-of-two checkpoints
  std::vector<std::size_t> checkpoints;
  double leftmost = 0;                // leftmost queried position
};

// Query frontier search: repeatedly reveal the children of the rightmost unqueried individual.
GreedyResult greedy_brw(const BrwSpec& spec, std::size_t steps, std::uint64_t seed);

}  // namespace rde
