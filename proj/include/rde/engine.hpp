#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rde/distance.hpp"
#include "rde/pool.hpp"
#include "rde/spec.hpp"

namespace rde {

class StateSpaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepDiagnostics {
  std::size_t cap_hits = 0;   // samples whose truncation hit k_max before certifying
  std::size_t max_terms = 0;
};

SamplePool apply_T(const SamplePool& pool, const RdeSpec& spec, std::uint64_t seed,
                   StepDiagnostics* diag = nullptr, const EvalOptions& opts = {});
BivariatePool apply_T2(const BivariatePool& bp, const RdeSpec& spec, std::uint64_t seed,
                       StepDiagnostics* diag = nullptr, const EvalOptions& opts = {});

// Output j of apply_T(pool, spec, seed) recomputed alone; used for exactness checks.
Value apply_T_single(const SamplePool& pool, const RdeSpec& spec, std::uint64_t seed, std::size_t j,
                     const EvalOptions& opts = {});

enum class DistanceKind { ks, wasserstein };
enum class StopReason { converged, max_iters, diverged };
const char* to_string(StopReason r);

struct IterateConfig {
  int max_iters = 200;
  double tol = 0.01;
  DistanceKind distance = DistanceKind::ks;
  double p = 1.0;
  double divergence_threshold = 1.0;  // median rise per generation, in pool sd
  int divergence_window = 10;
  double divergence_ratio = 1e6;
  int lag = 1;        // compare with the pool this many generations back
  int min_iters = 1;
  bool recenter = true;  // drop the translation 2-cycle of antitone specs
  std::uint64_t seed = 1;
};

struct GenerationRecord {
  std::uint64_t generation = 0;
  double distance = 0;
  PoolStats stats;
  std::size_t cap_hits = 0;
};

struct IterationReport {
  std::vector<GenerationRecord> records;
  StopReason stop_reason = StopReason::max_iters;
  std::string detail;
};

std::pair<SamplePool, IterationReport> iterate(const RdeSpec& spec, SamplePool init, const IterateConfig& cfg);

// Pool distance used by iterate; vector pools take the worst component.
double pool_distance(const SamplePool& a, const SamplePool& b, DistanceKind kind, double p);

enum class Verdict { endogenous, non_endogenous, inconclusive };
const char* to_string(Verdict v);

struct EndogenyConfig {
  int max_iters = 100;
  int min_iters = 0;   // no verdict before this generation
  double p = 1.0;
  double gap_tol = 0.05;
  double plateau_tol = 0.5;
  int window = 20;
  double plateau_rel = 0.02;
  std::uint64_t seed = 1;
};

struct GapRecord {
  std::uint64_t generation = 0;
  double raw = 0;
  double normalized = 0;
  bool degenerate = false;
};

struct EndogenyReport {
  std::vector<GapRecord> gaps;
  Verdict verdict = Verdict::inconclusive;
  BivariatePool final_pool;
};

EndogenyReport endogeny_iterate(const RdeSpec& spec, const SamplePool& fixed, const EndogenyConfig& cfg);

}  // namespace rde
