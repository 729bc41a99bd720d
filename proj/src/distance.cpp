#include "rde/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace rde {

namespace {

void require_scalar(const SamplePool& p, const char* who) {
  if (p.dim() != 1) throw std::invalid_argument(std::string(who) + ": vector pools are not supported");
  if (p.size() == 0) throw std::invalid_argument(std::string(who) + ": empty pool");
}

std::vector<double> sorted_scalars(const SamplePool& p) {
  auto xs = p.scalars();
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

double ks_distance(const SamplePool& a, const SamplePool& b) {
  require_scalar(a, "ks_distance");
  require_scalar(b, "ks_distance");
  return ks_sorted(sorted_scalars(a), sorted_scalars(b));
}

double ks_sorted(const std::vector<double>& xa, const std::vector<double>& xb) {
  const double na = double(xa.size()), nb = double(xb.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < xa.size() && j < xb.size()) {
    double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  return d;
}

double wasserstein_p(const SamplePool& a, const SamplePool& b, double p) {
  require_scalar(a, "wasserstein_p");
  require_scalar(b, "wasserstein_p");
  return wasserstein_sorted(sorted_scalars(a), sorted_scalars(b), p);
}

double wasserstein_sorted(const std::vector<double>& xa, const std::vector<double>& xb, double p) {
  if (p < 1) throw std::invalid_argument("wasserstein_p: p must be >= 1");
  if (xa.size() != xb.size()) throw std::invalid_argument("wasserstein_p: pools differ in size");
  if (xa.empty()) throw std::invalid_argument("wasserstein_p: empty pool");
  if (!std::isfinite(xa.back()) || !std::isfinite(xb.back()))
    throw std::invalid_argument("wasserstein_p: infinite values");
  double s = 0;
  for (std::size_t i = 0; i < xa.size(); ++i) s += std::pow(std::abs(xa[i] - xb[i]), p);
  return std::pow(s / double(xa.size()), 1.0 / p);
}

double ks_to_cdf(const SamplePool& a, const std::function<double(double)>& cdf) {
  require_scalar(a, "ks_to_cdf");
  auto xs = sorted_scalars(a);
  const double n = double(xs.size());
  double d = 0;
  std::size_t i = 0;
  while (i < xs.size() && std::isfinite(xs[i])) {
    double x = xs[i];
    double below = double(i) / n;
    while (i < xs.size() && xs[i] == x) ++i;
    double at = double(i) / n;
    d = std::max(d, std::abs(at - cdf(x)));
    d = std::max(d, std::abs(below - cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()))));
  }
  // Mass strictly below infinity.
  double fin = double(i) / n;
  d = std::max(d, std::abs(fin - cdf(std::numeric_limits<double>::max())));
  return d;
}

double total_variation(const SamplePool& a, const SamplePool& b) {
  require_scalar(a, "total_variation");
  require_scalar(b, "total_variation");
  std::map<double, double> diff;
  for (double x : a.scalars()) diff[x] += 1.0 / double(a.size());
  for (double x : b.scalars()) diff[x] -= 1.0 / double(b.size());
  double s = 0;
  for (auto& [k, v] : diff) s += std::abs(v);
  return 0.5 * s;
}

Gap diagonal_gap(const BivariatePool& bp, double p) {
  if (bp.size() < 2) throw std::invalid_argument("diagonal_gap: need at least two pairs");
  const std::size_t n = bp.size();
  double raw = 0, ref = 0;
  const std::size_t shift = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [x, y] = bp[i];
    const auto& y2 = bp[(i + shift) % n].second;
    if (x.is_inf() || y.is_inf() || y2.is_inf() || x.dim() != 1)
      throw std::invalid_argument("diagonal_gap: needs finite scalar coordinates");
    raw += std::pow(std::abs(x[0] - y[0]), p);
    ref += std::pow(std::abs(x[0] - y2[0]), p);
  }
  Gap g;
  g.raw = std::pow(raw / double(n), 1.0 / p);
  // Pool order is exchangeable, so a cyclic shift is an independent pairing.
  double den = std::pow(ref / double(n), 1.0 / p);
  if (den <= 0) {
    g.degenerate = true;
    g.normalized = std::numeric_limits<double>::quiet_NaN();
  } else {
    g.normalized = g.raw / den;
  }
  return g;
}

TailFit tail_exponent(const SamplePool& pool, double fit_fraction) {
  require_scalar(pool, "tail_exponent");
  if (!(fit_fraction > 0 && fit_fraction <= 1)) throw std::invalid_argument("tail_exponent: bad fit_fraction");
  auto xs = sorted_scalars(pool);
  const std::size_t n = xs.size();
  std::size_t k = std::max<std::size_t>(std::size_t(fit_fraction * double(n)), 3);
  k = std::min(k, n);
  std::vector<double> lx, ly;
  for (std::size_t r = n - k; r < n; ++r) {
    if (!std::isfinite(xs[r])) throw std::invalid_argument("tail_exponent: infinite values in the tail");
    // Survival just above the order statistic, with a half-sample correction.
    double surv = (double(n - r) - 0.5) / double(n);
    lx.push_back(xs[r]);
    ly.push_back(std::log(surv));
  }
  std::vector<double> distinct(lx);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw std::invalid_argument("tail_exponent: insufficient distinct tail values");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(ly.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  TailFit f;
  double slope = sxy / sxx;
  f.alpha = -slope;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.used = lx.size();
  return f;
}

}  // namespace rde
