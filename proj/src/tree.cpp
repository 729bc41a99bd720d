#include "rde/tree.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rde/engine.hpp"

namespace rde {

TruncatedRtf::TruncatedRtf(int depth, std::uint64_t seed) : depth_(depth), seed_(seed) {
  if (depth < 1) throw std::invalid_argument("TruncatedRtf: depth must be >= 1");
}

std::uint64_t TruncatedRtf::child_key(std::uint64_t parent, std::size_t i) { return mix_keys({parent, i + 1}); }

NoiseDraw TruncatedRtf::noise(const RdeSpec& spec, std::uint64_t key) const {
  return NoiseDraw(spec.noise, Rng::stream({seed_, key, 0x7eeULL}));
}

namespace {

struct BudgetExceeded {};

// Evaluates a node by recursing into children on demand.
class Evaluator {
 public:
  Evaluator(const RdeSpec& spec, const TruncatedRtf* tree, std::uint64_t tree_seed, const Boundary* boundary,
            std::uint64_t boundary_seed, const TreeOptions& opts)
      : spec_(spec), tree_(tree), tree_seed_(tree_seed), boundary_(boundary), boundary_seed_(boundary_seed),
        opts_(opts) {}

  Value eval(std::uint64_t key, int level);
  std::size_t nodes = 0;
  bool capped = false;

 private:
  class Kids final : public Children {
   public:
    Kids(Evaluator& ev, std::uint64_t key, int level) : ev_(ev), key_(key), level_(level) {}
    const Value& at(std::size_t i) override {
      if (cache_.size() <= i) {
        cache_.resize(i + 1);
        have_.resize(i + 1, 0);
      }
      if (!have_[i]) {
        cache_[i] = ev_.eval(TruncatedRtf::child_key(key_, i), level_ + 1);
        have_[i] = 1;
      }
      return cache_[i];
    }
    Bounds bounds(int) const override { return {}; }
    bool bounds_known() const override { return false; }

   private:
    Evaluator& ev_;
    std::uint64_t key_;
    int level_;
    std::vector<Value> cache_;
    std::vector<std::uint8_t> have_;
  };

  const RdeSpec& spec_;
  const TruncatedRtf* tree_;
  std::uint64_t tree_seed_;
  const Boundary* boundary_;
  std::uint64_t boundary_seed_;
  TreeOptions opts_;
};

Value Evaluator::eval(std::uint64_t key, int level) {
  if (tree_ && level == tree_->depth()) {
    Rng r = Rng::stream({boundary_seed_, key});
    return (*boundary_)(r);
  }
  if (!tree_ && level > opts_.max_height) throw BudgetExceeded{};
  if (++nodes > opts_.node_budget) throw BudgetExceeded{};
  NoiseDraw noise(spec_.noise, Rng::stream({tree_seed_, key, 0x7eeULL}));
  Kids kids(*this, key, level);
  EvalContext ctx;
  ctx.opts.k_max = opts_.fanout_cap;
  Value v = spec_.map(noise, kids, ctx);
  capped = capped || ctx.cap_hit;
  if (!spec_.state.contains(v)) throw StateSpaceError(spec_.name + ": tree node value outside state space");
  return v;
}

bool agree(const Value& a, const Value& b, double tol) {
  if (a.is_inf() || b.is_inf()) return a.is_inf() && b.is_inf();
  for (int c = 0; c < a.dim(); ++c)
    if (!(std::abs(a[c] - b[c]) <= tol)) return false;
  return true;
}

}  // namespace

TreeEval evaluate_root(const TruncatedRtf& tree, const RdeSpec& spec, const Boundary& boundary,
                       std::uint64_t boundary_seed, const TreeOptions& opts) {
  Evaluator ev(spec, &tree, tree.seed(), &boundary, boundary_seed, opts);
  TreeEval out;
  try {
    out.root = ev.eval(TruncatedRtf::root_key(), 0);
  } catch (const BudgetExceeded&) {
    throw std::runtime_error("evaluate_root: node budget exceeded");
  }
  out.nodes = ev.nodes;
  out.capped = ev.capped;
  return out;
}

std::optional<Value> exact_sample_finite(const RdeSpec& spec, std::uint64_t seed, const TreeOptions& opts) {
  if (!(spec.mean_arity <= 1.0))
    throw std::invalid_argument("exact_sample_finite: offspring law is not subcritical (mean " +
                                std::to_string(spec.mean_arity) + ")");
  Evaluator ev(spec, nullptr, seed, nullptr, 0, opts);
  try {
    return ev.eval(TruncatedRtf::root_key(), 0);
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

ExactPool exact_sample_pool(const RdeSpec& spec, std::size_t n, std::uint64_t seed, const TreeOptions& opts) {
  std::vector<Value> vals(n);
  std::vector<std::size_t> misses(n, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t j = 0; j < std::int64_t(n); ++j) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      auto v = exact_sample_finite(spec, mix_keys({seed, std::uint64_t(j), attempt}), opts);
      if (v) {
        vals[j] = *v;
        break;
      }
      ++misses[j];
    }
  }
  ExactPool out;
  for (auto m : misses) out.discarded += m;
  out.pool = SamplePool(std::move(vals), 0, {seed});
  return out;
}

ProbeResult cftp_endogeny_probe(const RdeSpec& spec, int depth, const Boundary& a, const Boundary& b,
                                std::size_t trials, std::uint64_t seed, double eq_tol, ProbeMode mode,
                                const TreeOptions& opts) {
  if (trials == 0) throw std::invalid_argument("cftp_endogeny_probe: no trials");
  const double tol = eq_tol < 0 ? spec.eq_tol : eq_tol;
  if (mode == ProbeMode::automatic) mode = spec.mean_arity == HUGE_VAL ? ProbeMode::pooled : ProbeMode::tree;
  ProbeResult res;
  res.trials = trials;
  std::size_t equal = 0;
  if (mode == ProbeMode::tree) {
    res.mode = "tree";
    std::vector<std::uint8_t> same(trials), capped(trials);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t t = 0; t < std::int64_t(trials); ++t) {
      TruncatedRtf tree(depth, mix_keys({seed, std::uint64_t(t)}));
      auto ra = evaluate_root(tree, spec, a, mix_keys({seed, std::uint64_t(t), 0xaULL}), opts);
      auto rb = evaluate_root(tree, spec, b, mix_keys({seed, std::uint64_t(t), 0xbULL}), opts);
      same[t] = agree(ra.root, rb.root, tol);
      capped[t] = ra.capped || rb.capped;
    }
    for (std::size_t t = 0; t < trials; ++t) {
      equal += same[t];
      res.capped = res.capped || capped[t];
    }
  } else {
    // Population version: pairs (A, B) pushed through depth bivariate steps with shared noise.
    res.mode = "pooled";
    std::vector<std::pair<Value, Value>> pairs(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng ra = Rng::stream({seed, t, 0xaULL}), rb = Rng::stream({seed, t, 0xbULL});
      pairs[t] = {a(ra), b(rb)};
    }
    BivariatePool bp(std::move(pairs));
    for (int d = 0; d < depth; ++d) {
      StepDiagnostics diag;
      bp = apply_T2(bp, spec, seed, &diag);
      res.capped = res.capped || diag.cap_hits > 0;
    }
    for (const auto& [x, y] : bp.pairs()) equal += agree(x, y, tol);
  }
  res.fraction_equal = double(equal) / double(trials);
  return res;
}

}  // namespace rde
