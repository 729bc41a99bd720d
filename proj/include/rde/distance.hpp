#pragma once

#include <functional>

#include "rde/pool.hpp"

namespace rde {

double ks_distance(const SamplePool& a, const SamplePool& b);
double wasserstein_p(const SamplePool& a, const SamplePool& b, double p);
// Same distances on already sorted scalar samples (+inf for the sentinel).
double ks_sorted(const std::vector<double>& xa, const std::vector<double>& xb);
double wasserstein_sorted(const std::vector<double>& xa, const std::vector<double>& xb, double p);
// Sup distance between the empirical CDF of a scalar pool and a target CDF.
// The sentinel counts as mass above every finite point.
double ks_to_cdf(const SamplePool& a, const std::function<double(double)>& cdf);
// Total variation between two pools over a finite set of symbols.
double total_variation(const SamplePool& a, const SamplePool& b);

struct Gap {
  double raw = 0;
  double normalized = 0;
  bool degenerate = false;
};
Gap diagonal_gap(const BivariatePool& bp, double p = 1.0);

struct TailFit {
  double alpha = 0;
  double r2 = 0;
  std::size_t used = 0;
};
TailFit tail_exponent(const SamplePool& pool, double fit_fraction);

}  // namespace rde
