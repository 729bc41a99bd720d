#include "rde/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "rde/distance.hpp"

namespace rde {

namespace {

constexpr std::uint64_t kNoiseTag = 1, kIndexTag = 2;

class IndexStream {
 public:
  IndexStream(Rng rng, std::size_t n) : rng_(rng), n_(n) {}
  std::size_t get(std::size_t i) {
    while (idx_.size() <= i) idx_.push_back(std::size_t(rng_.index(n_)));
    return idx_[i];
  }

 private:
  Rng rng_;
  std::size_t n_;
  boost::container::small_vector<std::size_t, 16> idx_;
};

using BoundsArray = std::array<Bounds, 3>;

BoundsArray pool_bounds(const SamplePool& p) {
  BoundsArray b;
  for (int c = 0; c < p.dim(); ++c) b[c] = p.bounds(c);
  return b;
}

class PoolChildren final : public Children {
 public:
  PoolChildren(const SamplePool& pool, IndexStream& idx, const BoundsArray& b) : pool_(pool), idx_(idx), b_(b) {}
  const Value& at(std::size_t i) override { return pool_[idx_.get(i)]; }
  Bounds bounds(int c) const override { return b_[c]; }

 private:
  const SamplePool& pool_;
  IndexStream& idx_;
  const BoundsArray& b_;
};

class PairChildren final : public Children {
 public:
  PairChildren(const BivariatePool& bp, IndexStream& idx, int coord, const BoundsArray& b)
      : bp_(bp), idx_(idx), coord_(coord), b_(b) {}
  const Value& at(std::size_t i) override {
    const auto& pr = bp_[idx_.get(i)];
    return coord_ == 0 ? pr.first : pr.second;
  }
  Bounds bounds(int c) const override { return b_[c]; }

 private:
  const BivariatePool& bp_;
  IndexStream& idx_;
  int coord_;
  const BoundsArray& b_;
};

void check_state(const RdeSpec& spec, const Value& v, std::size_t j) {
  if (!spec.state.contains(v)) {
    std::ostringstream os;
    os << spec.name << ": output " << j << " = " << v.as_double() << " outside state space "
       << spec.state.label;
    throw StateSpaceError(os.str());
  }
}

// Runs body(j) for every j, in parallel when available, rethrowing the first error.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::atomic<bool> failed{false};
  std::string message;
  bool state_error = false;
#pragma omp parallel for schedule(dynamic, 512)
  for (std::int64_t j = 0; j < std::int64_t(n); ++j) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(std::size_t(j));
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (!failed.exchange(true)) {
          message = e.what();
          state_error = dynamic_cast<const StateSpaceError*>(&e) != nullptr;
        }
      }
    }
  }
  if (failed) {
    if (state_error) throw StateSpaceError(message);
    throw std::runtime_error(message);
  }
}

std::vector<std::uint64_t> extend_lineage(const std::vector<std::uint64_t>& l, std::uint64_t seed) {
  auto out = l;
  if (out.empty() || out.back() != seed) out.push_back(seed);
  return out;
}

}  // namespace

Value apply_T_single(const SamplePool& pool, const RdeSpec& spec, std::uint64_t seed, std::size_t j,
                     const EvalOptions& opts) {
  const auto b = pool_bounds(pool);
  Rng base = Rng::stream({seed, pool.generation() + 1, j});
  NoiseDraw noise(spec.noise, base.fork(kNoiseTag));
  IndexStream idx(base.fork(kIndexTag), pool.size());
  PoolChildren kids(pool, idx, b);
  EvalContext ctx{opts};
  return spec.map(noise, kids, ctx);
}

SamplePool apply_T(const SamplePool& pool, const RdeSpec& spec, std::uint64_t seed, StepDiagnostics* diag,
                   const EvalOptions& opts) {
  if (pool.size() == 0) throw std::invalid_argument("apply_T: empty pool");
  const std::size_t n = pool.size();
  const auto b = pool_bounds(pool);
  std::vector<Value> out(n);
  std::vector<std::uint32_t> terms(n);
  std::vector<std::uint8_t> capped(n);
  parallel_for(n, [&](std::size_t j) {
    Rng base = Rng::stream({seed, pool.generation() + 1, j});
    NoiseDraw noise(spec.noise, base.fork(kNoiseTag));
    IndexStream idx(base.fork(kIndexTag), n);
    PoolChildren kids(pool, idx, b);
    EvalContext ctx{opts};
    out[j] = spec.map(noise, kids, ctx);
    check_state(spec, out[j], j);
    terms[j] = std::uint32_t(std::min<std::size_t>(ctx.terms, UINT32_MAX));
    capped[j] = ctx.cap_hit;
  });
  if (diag) {
    diag->cap_hits = std::size_t(std::count(capped.begin(), capped.end(), 1));
    diag->max_terms = n ? *std::max_element(terms.begin(), terms.end()) : 0;
  }
  return SamplePool(std::move(out), pool.generation() + 1, extend_lineage(pool.lineage(), seed));
}

BivariatePool apply_T2(const BivariatePool& bp, const RdeSpec& spec, std::uint64_t seed, StepDiagnostics* diag,
                       const EvalOptions& opts) {
  if (bp.size() == 0) throw std::invalid_argument("apply_T2: empty pool");
  const std::size_t n = bp.size();
  const auto b0 = pool_bounds(bp.marginal(0));
  const auto b1 = pool_bounds(bp.marginal(1));
  std::vector<std::pair<Value, Value>> out(n);
  std::vector<std::uint8_t> capped(n);
  std::vector<std::uint32_t> terms(n);
  parallel_for(n, [&](std::size_t j) {
    Rng base = Rng::stream({seed, bp.generation() + 1, j});
    NoiseDraw noise(spec.noise, base.fork(kNoiseTag));
    IndexStream idx(base.fork(kIndexTag), n);
    PairChildren k0(bp, idx, 0, b0), k1(bp, idx, 1, b1);
    EvalContext c0{opts}, c1{opts};
    Value x = spec.map(noise, k0, c0);
    Value y = spec.map(noise, k1, c1);
    check_state(spec, x, j);
    check_state(spec, y, j);
    out[j] = {x, y};
    capped[j] = c0.cap_hit || c1.cap_hit;
    terms[j] = std::uint32_t(std::max(c0.terms, c1.terms));
  });
  if (diag) {
    diag->cap_hits = std::size_t(std::count(capped.begin(), capped.end(), 1));
    diag->max_terms = n ? *std::max_element(terms.begin(), terms.end()) : 0;
  }
  return BivariatePool(std::move(out), bp.generation() + 1);
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::max_iters: return "max_iters";
    case StopReason::diverged: return "diverged";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::endogenous: return "endogenous-trend";
    case Verdict::non_endogenous: return "non-endogenous-trend";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double pool_distance(const SamplePool& a, const SamplePool& b, DistanceKind kind, double p) {
  double d = 0;
  for (int c = 0; c < a.dim(); ++c) {
    SamplePool ca = a.dim() == 1 ? a : a.component(c);
    SamplePool cb = b.dim() == 1 ? b : b.component(c);
    d = std::max(d, kind == DistanceKind::ks ? ks_distance(ca, cb) : wasserstein_p(ca, cb, p));
  }
  return d;
}

namespace {

// T(mu + a) = T(mu) - a, so T^2 fixes a whole translation family and the
// pool drifts along it. Shifting by half the mean change removes that mode
// and leaves the fixed points of T unchanged.
SamplePool recenter(double prev_mean, const SamplePool& next) {
  double sum = 0;
  std::size_t finite = 0;
  for (const auto& x : next.values())
    if (!x.is_inf()) {
      sum += x[0];
      ++finite;
    }
  const double shift = finite ? 0.5 * (prev_mean - sum / double(finite)) : 0.0;
  std::vector<Value> v(next.values());
  for (auto& x : v) {
    if (x.is_inf()) continue;
    if (x.dim() == 1) x = Value(x[0] + shift);
    else if (x.dim() == 2) x = Value::vec2(x[0] + shift, x[1]);
    else x = Value::vec3(x[0] + shift, x[1], x[2]);
  }
  return SamplePool(std::move(v), next.generation(), next.lineage());
}

}  // namespace

std::pair<SamplePool, IterationReport> iterate(const RdeSpec& spec, SamplePool init, const IterateConfig& cfg) {
  if (!(cfg.tol > 0)) throw std::invalid_argument("iterate: tol must be positive");
  if (cfg.lag < 1) throw std::invalid_argument("iterate: lag must be >= 1");
  IterationReport rep;
  // Each pool is sorted once per generation; stats and distances share the result.
  using Sorted = std::vector<std::vector<double>>;
  auto sort_pool = [](const SamplePool& p) {
    Sorted out(std::size_t(p.dim()));
    for (int c = 0; c < p.dim(); ++c) {
      out[std::size_t(c)] = p.scalars(c);
      std::sort(out[std::size_t(c)].begin(), out[std::size_t(c)].end());
    }
    return out;
  };
  std::deque<Sorted> recent;  // last `lag` pools
  recent.push_back(sort_pool(init));
  SamplePool cur = std::move(init);
  PoolStats cur_stats = stats_of_sorted(recent.back()[0]);
  double ref_scale = 0;
  int rising = 0;
  double prev_median = cur_stats.median, prev_sd = std::sqrt(cur_stats.variance);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    StepDiagnostics diag;
    SamplePool next = apply_T(cur, spec, cfg.seed, &diag);
    if (spec.translation_antitone && cfg.recenter) next = recenter(cur_stats.mean, next);
    Sorted sorted = sort_pool(next);
    GenerationRecord rec;
    rec.generation = next.generation();
    rec.stats = stats_of_sorted(sorted[0]);
    rec.cap_hits = diag.cap_hits;
    const Sorted& back = recent.front();
    // Infinite atoms make Wasserstein undefined; fall back to KS there.
    DistanceKind kind = cfg.distance;
    for (const Sorted* v : std::initializer_list<const Sorted*>{&sorted, &back})
      for (const auto& comp : *v)
        if (!comp.empty() && std::isinf(comp.back())) kind = DistanceKind::ks;
    rec.distance = 0;
    for (std::size_t c = 0; c < sorted.size(); ++c)
      rec.distance = std::max(rec.distance, kind == DistanceKind::ks ? ks_sorted(sorted[c], back[c])
                                                                     : wasserstein_sorted(sorted[c], back[c], cfg.p));
    rep.records.push_back(rec);
    cur_stats = rec.stats;

    const double med = rec.stats.median, sd = std::sqrt(rec.stats.variance);
    if (it == 1) ref_scale = std::max(std::abs(med), sd);
    bool diverged = false;
    std::ostringstream why;
    if (!std::isfinite(rec.stats.mean) || !std::isfinite(rec.stats.variance)) {
      diverged = true;
      why << "non-finite pool summary";
    }
    if (std::isfinite(med) && std::isfinite(prev_median) &&
        med - prev_median > cfg.divergence_threshold * prev_sd && med > prev_median) {
      if (++rising >= cfg.divergence_window) {
        diverged = true;
        why << "median rose by more than " << cfg.divergence_threshold << " sd for " << rising << " generations";
      }
    } else {
      rising = 0;
    }
    if (it > 1 && ref_scale > 0 && std::isfinite(med) && std::abs(med) > cfg.divergence_ratio * ref_scale) {
      diverged = true;
      why << "median exceeded " << cfg.divergence_ratio << "x its first-generation scale";
    }
    if (spec.divergence_ceiling && std::isfinite(med) && std::abs(med) > *spec.divergence_ceiling) {
      diverged = true;
      why << "median " << med << " beyond ceiling " << *spec.divergence_ceiling;
    }
    prev_median = med;
    prev_sd = sd;

    recent.push_back(std::move(sorted));
    while (recent.size() > std::size_t(cfg.lag)) recent.pop_front();
    cur = std::move(next);
    if (diverged) {
      rep.stop_reason = StopReason::diverged;
      rep.detail = why.str();
      return {std::move(cur), std::move(rep)};
    }
    if (it >= cfg.min_iters && it >= cfg.lag && rec.distance < cfg.tol) {
      rep.stop_reason = StopReason::converged;
      return {std::move(cur), std::move(rep)};
    }
  }
  rep.stop_reason = StopReason::max_iters;
  return {std::move(cur), std::move(rep)};
}

namespace {

// Bounded monotone relabelling of the extended reals so gaps stay finite at the sentinel.
BivariatePool compactify(const BivariatePool& bp) {
  std::vector<std::pair<Value, Value>> v;
  v.reserve(bp.size());
  auto h = [](const Value& x) { return x.is_inf() ? Value(1.0) : Value(x[0] / (1.0 + std::abs(x[0]))); };
  for (const auto& [a, b] : bp.pairs()) v.emplace_back(h(a), h(b));
  return BivariatePool(std::move(v), bp.generation());
}

}  // namespace

EndogenyReport endogeny_iterate(const RdeSpec& spec, const SamplePool& fixed, const EndogenyConfig& cfg) {
  if (fixed.dim() != 1) throw std::invalid_argument("endogeny_iterate: scalar specs only");
  EndogenyReport rep;
  BivariatePool bp = BivariatePool::independent(fixed, mix_keys({cfg.seed, 0xe0d0ULL}));
  const bool ext = spec.state.allows_inf;
  auto gap_of = [&](const BivariatePool& p) { return diagonal_gap(ext ? compactify(p) : p, cfg.p); };
  {
    Gap g = gap_of(bp);
    rep.gaps.push_back({bp.generation(), g.raw, g.normalized, g.degenerate});
  }
  for (int it = 1; it <= cfg.max_iters; ++it) {
    bp = apply_T2(bp, spec, cfg.seed);
    Gap g = gap_of(bp);
    rep.gaps.push_back({bp.generation(), g.raw, g.normalized, g.degenerate});
    if (it < cfg.min_iters) continue;
    // A diagonal pool is degenerate only through its raw gap, which is then zero.
    if ((g.degenerate && g.raw == 0) || (!g.degenerate && g.normalized < cfg.gap_tol)) {
      rep.verdict = Verdict::endogenous;
      break;
    }
    if (it >= cfg.window && !g.degenerate) {
      const auto& old = rep.gaps[rep.gaps.size() - 1 - std::size_t(cfg.window)];
      if (!old.degenerate && old.normalized > 0 && g.normalized > cfg.plateau_tol &&
          std::abs(g.normalized - old.normalized) / old.normalized < cfg.plateau_rel) {
        rep.verdict = Verdict::non_endogenous;
        break;
      }
    }
  }
  rep.final_pool = std::move(bp);
  return rep;
}

}  // namespace rde
