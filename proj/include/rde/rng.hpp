#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rde {

std::uint64_t splitmix64(std::uint64_t& state);

// Order-sensitive hash of a key tuple; used to derive independent stream seeds.
std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys);

// xoshiro256++ seeded through splitmix64. Cheap to construct, so every output
// sample gets its own stream keyed by (seed, generation, index, ...).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);
  static Rng stream(std::initializer_list<std::uint64_t> keys) { return Rng(mix_keys(keys)); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Independent child stream; does not advance this generator.
  Rng fork(std::uint64_t tag) const;

  double uniform();          // [0,1)
  double uniform_open();     // (0,1)
  double exponential(double rate = 1.0);
  double normal();
  std::uint64_t index(std::uint64_t n);   // uniform on {0..n-1}
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t s_[4];
};

}  // namespace rde
