#include "rde/pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rde {

SamplePool::SamplePool(std::vector<Value> values, std::uint64_t generation,
                       std::vector<std::uint64_t> lineage)
    : values_(std::move(values)), generation_(generation), lineage_(std::move(lineage)) {}

SamplePool SamplePool::from_doubles(const std::vector<double>& xs) {
  std::vector<Value> v;
  v.reserve(xs.size());
  for (double x : xs) v.push_back(std::isinf(x) && x > 0 ? Value::infinity() : Value(x));
  return SamplePool(std::move(v));
}

SamplePool SamplePool::constant(Value v, std::size_t n) { return SamplePool(std::vector<Value>(n, v)); }

SamplePool SamplePool::sample(std::size_t n, const std::function<Value(Rng&)>& draw, std::uint64_t seed) {
  std::vector<Value> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng r = Rng::stream({seed, 0x5eedULL, i});
    v[i] = draw(r);
  }
  return SamplePool(std::move(v), 0, {seed});
}

std::vector<double> SamplePool::scalars(int component) const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& v : values_)
    out.push_back(v.is_inf() ? std::numeric_limits<double>::infinity() : v[component]);
  return out;
}

SamplePool SamplePool::component(int c) const {
  std::vector<Value> v;
  v.reserve(values_.size());
  for (const auto& x : values_) v.push_back(x.is_inf() ? Value::infinity() : Value(x[c]));
  return SamplePool(std::move(v), generation_, lineage_);
}

Bounds SamplePool::bounds(int component) const {
  Bounds b;
  b.lo = std::numeric_limits<double>::infinity();
  b.hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : values_) {
    if (v.is_inf()) {
      b.has_inf = true;
      continue;
    }
    b.has_finite = true;
    b.lo = std::min(b.lo, v[component]);
    b.hi = std::max(b.hi, v[component]);
  }
  return b;
}

PoolStats SamplePool::stats(int component) const {
  std::vector<double> xs = scalars(component);
  std::sort(xs.begin(), xs.end());
  return stats_of_sorted(xs);
}

PoolStats stats_of_sorted(const std::vector<double>& xs) {
  PoolStats s;
  const std::size_t n = xs.size();
  if (n == 0) return s;
  std::size_t finite = 0;
  double sum = 0;
  for (double x : xs)
    if (std::isfinite(x)) {
      ++finite;
      sum += x;
    }
  s.frac_inf = double(n - finite) / double(n);
  if (finite > 0) {
    s.mean = sum / double(finite);
    double ss = 0;
    for (std::size_t i = 0; i < finite; ++i) ss += (xs[i] - s.mean) * (xs[i] - s.mean);
    s.variance = finite > 1 ? ss / double(finite - 1) : 0.0;
    s.min = xs.front();
    s.max = xs[finite - 1];
  }
  auto q = [&](double level) {
    std::size_t k = static_cast<std::size_t>(std::ceil(level * double(n)));
    if (k > 0) --k;
    return xs[std::min(k, n - 1)];
  };
  for (int i = 0; i < 9; ++i) s.quantiles[i] = q(0.1 * (i + 1));
  s.median = s.quantiles[4];
  return s;
}

BivariatePool BivariatePool::diagonal(const SamplePool& p) {
  std::vector<std::pair<Value, Value>> v;
  v.reserve(p.size());
  for (const auto& x : p.values()) v.emplace_back(x, x);
  return BivariatePool(std::move(v), p.generation());
}

BivariatePool BivariatePool::independent(const SamplePool& p, std::uint64_t seed) {
  std::vector<std::pair<Value, Value>> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rng r = Rng::stream({seed, 0xb1ULL, i});
    auto a = r.index(p.size());
    auto b = r.index(p.size());
    v[i] = {p[a], p[b]};
  }
  return BivariatePool(std::move(v), p.generation());
}

BivariatePool BivariatePool::product(const SamplePool& a, const SamplePool& b) {
  if (a.size() != b.size()) throw std::invalid_argument("product: pools differ in size");
  std::vector<std::pair<Value, Value>> v;
  v.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v.emplace_back(a[i], b[i]);
  return BivariatePool(std::move(v), a.generation());
}

SamplePool BivariatePool::marginal(int which) const {
  std::vector<Value> v;
  v.reserve(pairs_.size());
  for (const auto& pr : pairs_) v.push_back(which == 0 ? pr.first : pr.second);
  return SamplePool(std::move(v), generation_);
}

}  // namespace rde
