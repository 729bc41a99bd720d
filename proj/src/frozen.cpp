#include "rde/frozen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rde/distance.hpp"
#include "rde/rng.hpp"

namespace rde {

double frozen_cdf(double y, double x0) {
  if (y < 0.5) return 0;
  if (std::isinf(y)) return 1 - frozen_atom(x0);
  return 1 - 1 / (2 * std::min(y, x0));
}

double frozen_atom(double x0) { return 1 / (2 * x0); }

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Freezing rule: a finite join time survives only if it exceeds the edge's opening time.
inline double phi(double x, double u) { return x > u ? x : kInf; }
}  // namespace

FrozenStats frozen_perc_local_stats(const SamplePool& fixed_pool, std::size_t n_samples, std::uint64_t seed,
                                    int z_bins, double precheck_tol) {
  if (fixed_pool.size() < 2 || n_samples == 0) throw std::invalid_argument("frozen_perc_local_stats: empty input");
  FrozenStats s;
  s.precheck_ks = ks_to_cdf(fixed_pool, [](double y) { return frozen_cdf(y); });
  if (s.precheck_ks > precheck_tol) {
    std::ostringstream os;
    os << "frozen_perc_local_stats: pool is " << s.precheck_ks << " from the join-time law (tol " << precheck_tol
       << ")";
    throw std::invalid_argument(os.str());
  }
  const auto ys = fixed_pool.scalars();
  const std::size_t m = ys.size();
  std::size_t e_inf = 0, e_fin = 0, v_inf = 0, v_fin = 0;
  s.z_count.assign(std::size_t(z_bins), 0);
  const double width = 0.5 / z_bins;
  for (std::size_t i = 0; i < n_samples; ++i) {
    Rng r = Rng::stream({seed, i});
    // Edge: opening time U against the four join times beyond its endpoints.
    double u = r.uniform();
    double my = kInf;
    for (int k = 0; k < 4; ++k) my = std::min(my, ys[r.index(m)]);
    if (u < my) {
      if (std::isfinite(my)) {
        ++e_inf;
        int b = std::clamp(int((my - 0.5) / width), 0, z_bins - 1);
        ++s.z_count[std::size_t(b)];
      } else {
        ++e_fin;
      }
    }
    // Vertex: three incident edges, each seeing two join times beyond its far end.
    std::array<double, 3> uk, mk, yk;
    for (int k = 0; k < 3; ++k) {
      uk[k] = r.uniform();
      mk[k] = std::min(ys[r.index(m)], ys[r.index(m)]);
      yk[k] = phi(mk[k], uk[k]);
    }
    bool open = false, infinite = false;
    for (int k = 0; k < 3; ++k) {
      double others = mk[k];
      for (int j = 0; j < 3; ++j)
        if (j != k) others = std::min(others, yk[j]);
      if (uk[k] < others) {
        open = true;
        infinite = infinite || std::isfinite(others);
      }
    }
    if (open && infinite) ++v_inf;
    else if (open) ++v_fin;
  }
  const double n = double(n_samples);
  s.n = n_samples;
  s.p_edge_inf = double(e_inf) / n;
  s.p_edge_fin = double(e_fin) / n;
  s.p_edge_out = double(n_samples - e_inf - e_fin) / n;
  s.p_vertex_inf = double(v_inf) / n;
  s.p_vertex_fin = double(v_fin) / n;
  s.p_vertex_out = double(n_samples - v_inf - v_fin) / n;
  for (int b = 0; b < z_bins; ++b) {
    s.z_lo.push_back(0.5 + b * width);
    s.z_hi.push_back(0.5 + (b + 1) * width);
    s.z_density.push_back(double(s.z_count[std::size_t(b)]) / (n * width));
  }
  return s;
}

}  // namespace rde
