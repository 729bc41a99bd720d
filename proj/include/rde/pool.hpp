#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rde/rng.hpp"
#include "rde/value.hpp"

namespace rde {

struct PoolStats {
  double mean = 0;      // over finite values
  double variance = 0;  // over finite values
  std::array<double, 9> quantiles{};  // levels 0.1..0.9, +inf where the level falls on the atom
  double median = 0;
  double frac_inf = 0;
  double min = 0, max = 0;  // finite range
};

// Finite support range of one component plus whether the sentinel occurs.
struct Bounds {
  double lo = 0, hi = 0;
  bool has_inf = false;
  bool has_finite = false;
};

// Summary of an ascending sample with +inf for the sentinel.
PoolStats stats_of_sorted(const std::vector<double>& xs);

class SamplePool {
 public:
  SamplePool() = default;
  explicit SamplePool(std::vector<Value> values, std::uint64_t generation = 0,
                      std::vector<std::uint64_t> lineage = {});

  static SamplePool from_doubles(const std::vector<double>& xs);
  static SamplePool constant(Value v, std::size_t n);
  static SamplePool sample(std::size_t n, const std::function<Value(Rng&)>& draw, std::uint64_t seed);

  std::size_t size() const { return values_.size(); }
  const Value& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Value>& values() const { return values_; }
  std::uint64_t generation() const { return generation_; }
  const std::vector<std::uint64_t>& lineage() const { return lineage_; }
  int dim() const { return values_.empty() ? 1 : values_.front().dim(); }

  std::vector<double> scalars(int component = 0) const;  // inf -> +inf double
  SamplePool component(int c) const;
  Bounds bounds(int component = 0) const;
  PoolStats stats(int component = 0) const;

 private:
  std::vector<Value> values_;
  std::uint64_t generation_ = 0;
  std::vector<std::uint64_t> lineage_;
};

class BivariatePool {
 public:
  BivariatePool() = default;
  BivariatePool(std::vector<std::pair<Value, Value>> pairs, std::uint64_t generation = 0)
      : pairs_(std::move(pairs)), generation_(generation) {}

  static BivariatePool diagonal(const SamplePool& p);
  // Two independent resamplings of the same pool.
  static BivariatePool independent(const SamplePool& p, std::uint64_t seed);
  static BivariatePool product(const SamplePool& a, const SamplePool& b);

  std::size_t size() const { return pairs_.size(); }
  const std::pair<Value, Value>& operator[](std::size_t i) const { return pairs_[i]; }
  const std::vector<std::pair<Value, Value>>& pairs() const { return pairs_; }
  std::uint64_t generation() const { return generation_; }
  SamplePool marginal(int which) const;

 private:
  std::vector<std::pair<Value, Value>> pairs_;
  std::uint64_t generation_ = 0;
};

}  // namespace rde
