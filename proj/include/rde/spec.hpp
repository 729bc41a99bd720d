#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "rde/pool.hpp"
#include "rde/rng.hpp"
#include "rde/value.hpp"

namespace rde {

inline constexpr std::int64_t kUnbounded = -1;

struct NoiseLaw {
  // Number of children, or kUnbounded for Poisson-process families.
  std::function<std::int64_t(Rng&)> arity;
  // Term i (0-based) given the previous term; Poisson families use prev.
  std::function<double(Rng&, std::size_t, double)> term;
  int n_extra = 0;
  std::function<void(Rng&, double*)> extra;
  // Compound noise: values picked uniformly from a frozen pool.
  std::shared_ptr<const SamplePool> cross_ref;
  int n_cross = 0;
};

class NoiseDraw {
 public:
  NoiseDraw(const NoiseLaw& law, Rng rng);

  std::int64_t arity() const { return arity_; }
  bool unbounded() const { return arity_ == kUnbounded; }
  double term(std::size_t i);
  std::size_t materialized() const { return terms_.size(); }
  double extra(int k) const { return extra_[k]; }
  const Value& cross(int k) const { return cross_[k]; }

 private:
  const NoiseLaw* law_;
  Rng term_rng_;
  std::int64_t arity_;
  boost::container::small_vector<double, 16> terms_;
  std::array<double, 4> extra_{};
  std::array<Value, 2> cross_{};
};

// Indexed accessor of child values; children are materialized on demand.
class Children {
 public:
  virtual ~Children() = default;
  virtual const Value& at(std::size_t i) = 0;
  // Support bounds of any child value; unknown for tree evaluation.
  virtual Bounds bounds(int component = 0) const = 0;
  virtual bool bounds_known() const { return true; }
};

struct EvalOptions {
  double horizon_factor = 1.0;  // 2 re-evaluates with a doubled truncation horizon
  std::size_t k_max = 10000;
};

struct EvalContext {
  EvalOptions opts;
  bool cap_hit = false;
  std::size_t terms = 0;
};

using MapFn = std::function<Value(NoiseDraw&, Children&, EvalContext&)>;

enum class Truncation { none, adaptive };

struct RdeSpec {
  std::string name;
  StateSpace state;
  NoiseLaw noise;
  MapFn map;
  Truncation truncation = Truncation::none;
  bool monotone = false;
  double eq_tol = 1e-9;
  // Medians beyond this count as divergence; guards super-linear cost blowup.
  std::optional<double> divergence_ceiling;
  // g(xi, X + a) = g(xi, X) - a for every child shift a
  bool translation_antitone = false;
  double mean_arity = 0;  // for subcriticality checks; infinity for Poisson families
};

// Runs over the terms of `noise`, calling visit(i) for each until final(next_term)
// certifies that no later term can change the output. Finite arity: all terms.
template <class Visit, class Final>
void scan_terms(NoiseDraw& noise, Children& kids, EvalContext& ctx, Visit&& visit, Final&& final) {
  if (!noise.unbounded()) {
    for (std::int64_t i = 0; i < noise.arity(); ++i) visit(std::size_t(i));
    ctx.terms = std::max<std::size_t>(ctx.terms, std::size_t(noise.arity()));
    return;
  }
  const bool known = kids.bounds_known();
  std::size_t stop_at = std::numeric_limits<std::size_t>::max();
  std::size_t i = 0;
  for (;; ++i) {
    if (i >= stop_at) break;
    if (i >= ctx.opts.k_max) {
      if (stop_at == std::numeric_limits<std::size_t>::max()) ctx.cap_hit = true;
      break;
    }
    if (stop_at == std::numeric_limits<std::size_t>::max() && known && final(noise.term(i))) {
      stop_at = ctx.opts.horizon_factor > 1.0
                    ? i + std::max<std::size_t>(std::size_t(double(i) * (ctx.opts.horizon_factor - 1.0)), 1)
                    : i;
      if (i >= stop_at) break;
    }
    visit(i);
  }
  ctx.terms = std::max(ctx.terms, i);
}

}  // namespace rde
