#pragma once

#include <cstdint>
#include <vector>

#include "rde/pool.hpp"

namespace rde {

struct FrozenStats {
  double p_edge_inf = 0, p_edge_fin = 0, p_edge_out = 0;
  double p_vertex_inf = 0, p_vertex_fin = 0, p_vertex_out = 0;
  // Join time Z of edges in infinite clusters, on [1/2, 1].
  std::vector<double> z_lo, z_hi;
  std::vector<std::size_t> z_count;
  std::vector<double> z_density;  // count / (n * width): a sub-density of total mass p_edge_inf
  std::size_t n = 0;
  double precheck_ks = 0;
};

// Local statistics of frozen percolation on the 3-regular tree from a pool
// approximating the join-time law. Throws if the pool fails the oracle check.
FrozenStats frozen_perc_local_stats(const SamplePool& fixed_pool, std::size_t n_samples, std::uint64_t seed,
                                    int z_bins = 10, double precheck_tol = 0.03);

// The join-time law with atom 1/(2 x0) at infinity.
double frozen_cdf(double y, double x0 = 1.0);
double frozen_atom(double x0 = 1.0);

}  // namespace rde
