#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rde/catalog.hpp"
#include "rde/distance.hpp"
#include "rde/engine.hpp"

using namespace rde;

namespace {

SamplePool logistic_pool(std::size_t n, std::uint64_t seed) {
  return SamplePool::sample(n, [](Rng& r) { double u = r.uniform_open(); return Value(std::log(u / (1 - u))); }, seed);
}

// A pool in the entry's state space, a few generations from its default start.
SamplePool warm_pool(const std::string& id, std::size_t n, int gens = 3) {
  RdeSpec s = build_spec(id);
  SamplePool p = default_init(id, {}, n, 11);
  for (int g = 0; g < gens; ++g) p = apply_T(p, s, 100 + g);
  return p;
}

bool same(const SamplePool& a, const SamplePool& b) { return a.values() == b.values(); }

}  // namespace

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a = Rng::stream({1, 2, 3}), b = Rng::stream({1, 2, 3}), c = Rng::stream({1, 2, 4});
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
  CHECK(Rng::stream({1, 2, 3})() != c());
  Rng f = a.fork(1), g = a.fork(1), h = a.fork(2);
  CHECK(f() == g());
  CHECK(a.fork(1)() != h());
  Rng r(5);
  double s = 0;
  for (int i = 0; i < 100000; ++i) s += r.uniform();
  CHECK(s / 1e5 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("value sentinel orders above reals") {
  Value inf = Value::infinity();
  CHECK(ext_less(Value(1e300), inf));
  CHECK(!ext_less(inf, inf));
  CHECK(ext_min(inf, Value(2.0)) == Value(2.0));
  CHECK(std::isinf(inf.as_double()));
  CHECK(Value::vec2(1, 2).dim() == 2);
}

TEST_CASE("ks distance examples") {
  auto a = SamplePool::from_doubles({0, 0}), b = SamplePool::from_doubles({1, 1});
  CHECK(ks_distance(a, b) == 1.0);
  CHECK(ks_distance(a, a) == 0.0);
  auto p = logistic_pool(100000, 1), q = logistic_pool(100000, 2);
  double d = ks_distance(p, q);
  CHECK(d < 0.02);
  CHECK(d == ks_distance(q, p));
  std::vector<Value> w{Value(0.0), Value::infinity()};
  CHECK(ks_distance(SamplePool(w), SamplePool::from_doubles({0, 0})) == doctest::Approx(0.5));
  CHECK_THROWS(ks_distance(SamplePool({Value::vec2(0, 0)}), SamplePool({Value::vec2(0, 0)})));
}

TEST_CASE("wasserstein examples") {
  CHECK(wasserstein_p(SamplePool::from_doubles({0, 1}), SamplePool::from_doubles({2, 3}), 1) == doctest::Approx(2));
  CHECK(wasserstein_p(SamplePool::from_doubles({0, 10}), SamplePool::from_doubles({0, 0}), 2) ==
        doctest::Approx(std::sqrt(50.0)));
  auto p = logistic_pool(1000, 3);
  CHECK(wasserstein_p(p, p, 1) == 0.0);
  CHECK_THROWS(wasserstein_p(SamplePool::from_doubles({0, 1}), SamplePool::from_doubles({0}), 1));
  CHECK_THROWS(wasserstein_p(SamplePool({Value(0.0), Value::infinity()}), SamplePool::from_doubles({0, 1}), 1));
}

TEST_CASE("wasserstein is a metric matching brute-force couplings") {
  Rng r(9);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + r.index(6);
    const double p = 1 + 2 * r.uniform();
    auto draw = [&] {
      std::vector<double> x(n);
      for (auto& v : x) v = 10 * r.normal();
      return x;
    };
    auto xa = draw(), xb = draw(), xc = draw();
    auto a = SamplePool::from_doubles(xa), b = SamplePool::from_doubles(xb), c = SamplePool::from_doubles(xc);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = HUGE_VAL;
    do {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(xa[i] - xb[perm[i]]), p);
      best = std::min(best, std::pow(s / n, 1 / p));
    } while (std::next_permutation(perm.begin(), perm.end()));
    double w = wasserstein_p(a, b, p);
    CHECK(w == doctest::Approx(best).epsilon(1e-9));
    CHECK(w == doctest::Approx(wasserstein_p(b, a, p)).epsilon(1e-12));
    CHECK(wasserstein_p(a, c, p) <= w + wasserstein_p(b, c, p) + 1e-9);
  }
}

TEST_CASE("diagonal gap") {
  auto p = logistic_pool(20000, 4);
  Gap g = diagonal_gap(BivariatePool::diagonal(p));
  CHECK(g.raw == 0.0);
  CHECK(g.normalized == 0.0);
  Gap h = diagonal_gap(BivariatePool::independent(p, 5));
  CHECK(h.normalized == doctest::Approx(1.0).epsilon(0.05));
  Gap d = diagonal_gap(BivariatePool::diagonal(SamplePool::from_doubles({2, 2, 2})));
  CHECK(d.degenerate);
}

TEST_CASE("tail exponent") {
  auto e2 = SamplePool::sample(100000, [](Rng& r) { return Value(r.exponential(2.0)); }, 6);
  CHECK(tail_exponent(e2, 0.05).alpha == doctest::Approx(2.0).epsilon(0.1));
  CHECK(tail_exponent(logistic_pool(100000, 7), 0.05).alpha == doctest::Approx(1.0).epsilon(0.1));
  CHECK_THROWS(tail_exponent(SamplePool::constant(Value(1.0), 1000), 0.1));
}

TEST_CASE("apply_T is deterministic across thread counts and preserves size") {
  for (const char* id : {"meanfield_matching", "quicksort", "frozen_perc", "gw_matching"}) {
    CAPTURE(id);
    SamplePool p = warm_pool(id, 5000);
    RdeSpec s = build_spec(id);
#ifdef _OPENMP
    int before = omp_get_max_threads();
    omp_set_num_threads(1);
    SamplePool a = apply_T(p, s, 42);
    omp_set_num_threads(4);
    SamplePool b = apply_T(p, s, 42);
    omp_set_num_threads(before);
#else
    SamplePool a = apply_T(p, s, 42), b = apply_T(p, s, 42);
#endif
    CHECK(same(a, b));
    CHECK(a.size() == p.size());
    CHECK(a.generation() == p.generation() + 1);
    CHECK(!same(a, apply_T(p, s, 43)));
  }
}

TEST_CASE("lindley one step from zeros") {
  RdeSpec s = build_spec("lindley", {{"c", 2.0}});
  SamplePool out = apply_T(SamplePool::constant(Value(0.0), 100000), s, 1);
  std::size_t zeros = 0;
  for (const auto& v : out.values()) {
    CHECK(v[0] >= 0);
    zeros += v[0] == 0;
  }
  CHECK(double(zeros) / 1e5 == doctest::Approx(1 - std::exp(-2.0)).epsilon(0.01));
}

TEST_CASE("one step on oracle pools") {
  const std::size_t n = 100000;
  const double tol = 3 * 1.36 / std::sqrt(double(n));
  auto hom = oracle("species_extinction_hom", {{"a", 1.0}});
  SamplePool p = SamplePool::sample(n, hom.sampler, 3);
  SamplePool out = apply_T(p, build_spec("species_extinction_hom", {{"a", 1.0}}), 4);
  CHECK(ks_to_cdf(out, [](double x) { return x / (1 + x); }) < tol);
  SamplePool q = logistic_pool(n, 5);
  SamplePool mo = apply_T(q, build_spec("meanfield_matching", {{"d", 1.0}}), 6);
  CHECK(ks_to_cdf(mo, [](double x) { return 1 / (1 + std::exp(-x)); }) < tol);
}

TEST_CASE("apply_T2 keeps diagonal pools exactly diagonal") {
  for (const auto& e : registry()) {
    if (e.id == "gw_matching_Z") continue;  // builds its own X pool; covered below with a small one
    CAPTURE(e.id);
    SamplePool p = warm_pool(e.id, 2000, 2);
    BivariatePool out = apply_T2(BivariatePool::diagonal(p), build_spec(e.id), 7);
    bool diag = true;
    for (const auto& [x, y] : out.pairs()) diag = diag && x == y;
    CHECK(diag);
  }
  Params zp{{"x_pool", 1000.0}, {"x_iters", 5.0}};
  RdeSpec zs = build_spec("gw_matching_Z", zp);
  BivariatePool out = apply_T2(BivariatePool::diagonal(SamplePool::constant(Value(0.0), 1000)), zs, 1);
  for (const auto& [x, y] : out.pairs()) CHECK(x == y);
}

TEST_CASE("apply_T2 marginals match apply_T") {
  const std::size_t n = 20000;
  for (const char* id : {"meanfield_matching", "gw_matching", "quicksort", "frozen_perc"}) {
    CAPTURE(id);
    SamplePool p = warm_pool(id, n);
    RdeSpec s = build_spec(id);
    BivariatePool b = apply_T2(BivariatePool::independent(p, 8), s, 9);
    SamplePool single = apply_T(p, s, 10);
    CHECK(ks_distance(b.marginal(0), single) < 4 * 1.36 / std::sqrt(double(n)));
  }
}

TEST_CASE("adaptive truncation is exact under a doubled horizon") {
  for (const auto& e : registry()) {
    RdeSpec s = build_spec(e.id, e.id == "gw_matching_Z" ? Params{{"x_pool", 500.0}, {"x_iters", 3.0}} : Params{});
    if (s.truncation != Truncation::adaptive) continue;
    CAPTURE(e.id);
    SamplePool p = warm_pool(e.id, 3000, 2);
    EvalOptions twice;
    twice.horizon_factor = 2.0;
    bool exact = true;
    for (std::size_t j = 0; j < 300; ++j)
      exact = exact && apply_T_single(p, s, 77, j) == apply_T_single(p, s, 77, j, twice);
    CHECK(exact);
    SamplePool out = apply_T(p, s, 77);
    CHECK(apply_T_single(p, s, 77, 5) == out[5]);
  }
}

TEST_CASE("closed-form fixed points are stationary under one step") {
  const std::size_t n = 100000;
  for (const auto& e : registry()) {
    if (e.oracle_kind != OracleKind::closed_cdf) continue;
    Oracle o = oracle(e.id);
    if (!o.sampler || !o.cdf) continue;
    CAPTURE(e.id);
    SamplePool p = SamplePool::sample(n, o.sampler, 12);
    SamplePool out = apply_T(p, build_spec(e.id), 13);
    if (out.dim() == 1) CHECK(ks_distance(out, p) < 0.01);
  }
}

TEST_CASE("monotone specs iterate upward from zero") {
  const std::size_t n = 20000;
  const double slack = 3 / std::sqrt(double(n));
  for (const auto& e : registry()) {
    RdeSpec s = build_spec(e.id, e.id == "gw_matching_Z" ? Params{{"x_pool", 500.0}, {"x_iters", 3.0}} : Params{});
    if (!s.monotone || !std::isfinite(s.state.lower) || s.state.dim != 1) continue;
    CAPTURE(e.id);
    SamplePool p = SamplePool::constant(Value(s.state.lower), n);
    for (int g = 0; g < 8; ++g) {
      SamplePool next = apply_T(p, s, 200 + g);
      auto prev = p.scalars(), cur = next.scalars();
      std::sort(prev.begin(), prev.end());
      std::sort(cur.begin(), cur.end());
      for (int k = 1; k <= 9; ++k) {
        double lvl = k / 10.0;
        auto at = [&](const std::vector<double>& v, double a) {
          return v[std::min(v.size() - 1, std::size_t(std::max(0.0, a) * double(v.size())))];
        };
        CHECK(at(cur, lvl) >= at(prev, lvl - slack));
      }
      p = std::move(next);
    }
  }
}

TEST_CASE("state-space violations are reported") {
  RdeSpec s = build_spec("lindley");
  s.map = [](NoiseDraw& nd, Children& k, EvalContext&) { return Value(k.at(0)[0] + nd.term(0) - 10); };
  CHECK_THROWS_AS(apply_T(SamplePool::from_doubles({0, 2}), s, 1), StateSpaceError);
}

TEST_CASE("iterate examples") {
  SUBCASE("gw_height converges with P(H=1) one half") {
    RdeSpec s = build_spec("gw_height");
    IterateConfig c;
    c.tol = 0.005;
    auto [p, r] = iterate(s, default_init("gw_height", {}, 100000, 1), c);
    CHECK(r.stop_reason == StopReason::converged);
    std::size_t ones = 0;
    for (const auto& v : p.values()) ones += v[0] == 1.0;
    CHECK(double(ones) / 1e5 == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("meanfield_subtree below and above the critical cost") {
    IterateConfig c;
    auto [p, r] = iterate(build_spec("meanfield_subtree", {{"c", 0.2}}), default_init("meanfield_subtree", {}, 20000, 1), c);
    CHECK(r.stop_reason == StopReason::converged);
    CHECK(std::isfinite(p.stats().mean));
    auto [q, r2] =
        iterate(build_spec("meanfield_subtree", {{"c", 0.35}}), default_init("meanfield_subtree", {}, 20000, 1), c);
    CHECK(r2.stop_reason == StopReason::diverged);
  }
  SUBCASE("report records are well formed") {
    IterateConfig c;
    c.max_iters = 5;
    c.tol = 1e-12;
    auto [p, r] = iterate(build_spec("lindley", {{"c", 1.5}}), default_init("lindley", {}, 2000, 1), c);
    CHECK(r.stop_reason == StopReason::max_iters);
    REQUIRE(r.records.size() == 5);
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      CHECK(r.records[i].distance >= 0);
      if (i) CHECK(r.records[i].generation > r.records[i - 1].generation);
    }
  }
  SUBCASE("tol must be positive") {
    IterateConfig c;
    c.tol = 0;
    CHECK_THROWS(iterate(build_spec("lindley"), default_init("lindley", {}, 100, 1), c));
  }
}

TEST_CASE("bivariate examples") {
  SUBCASE("mod2_shift from a product stays uncorrelated") {
    RdeSpec s = build_spec("mod2_shift");
    auto bern = SamplePool::sample(20000, [](Rng& r) { return Value(r.uniform() < 0.5 ? 1.0 : 0.0); }, 1);
    BivariatePool b = BivariatePool::independent(bern, 2);
    for (int g = 0; g < 10; ++g) b = apply_T2(b, s, 30 + g);
    double sx = 0, sy = 0, sxy = 0;
    for (const auto& [x, y] : b.pairs()) {
      sx += x[0];
      sy += y[0];
      sxy += x[0] * y[0];
    }
    const double n = double(b.size());
    double cov = sxy / n - (sx / n) * (sy / n);
    CHECK(std::abs(cov / 0.25) < 4 / std::sqrt(n));
    CHECK(diagonal_gap(b).normalized == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("meanfield_matching pairs contract") {
    RdeSpec s = build_spec("meanfield_matching");
    BivariatePool b = BivariatePool::independent(logistic_pool(20000, 3), 4);
    double first = diagonal_gap(b).raw;
    for (int g = 0; g < 30; ++g) b = apply_T2(b, s, 50 + g);
    CHECK(diagonal_gap(b).raw < 0.3 * first);
  }
}

TEST_CASE("endogeny verdicts") {
  EndogenyConfig c;
  c.max_iters = 80;
  c.min_iters = 30;
  auto from_oracle = [](const char* id, std::size_t n) { return SamplePool::sample(n, oracle(id).sampler, 3); };
  CHECK(endogeny_iterate(build_spec("gw_matching"), from_oracle("gw_matching", 20000), c).verdict ==
        Verdict::endogenous);
  CHECK(endogeny_iterate(build_spec("mod2_shift"), from_oracle("mod2_shift", 20000), c).verdict ==
        Verdict::non_endogenous);
  auto half = SamplePool::sample(20000, [](Rng& r) { return Value(r.uniform() < 0.5 ? 1.0 : 0.0); }, 4);
  // Above eps = 1/6 the symmetric law is the stable one.
  EndogenyReport nv = endogeny_iterate(build_spec("noisy_voter", {{"eps", 0.25}}), half, c);
  CHECK(nv.verdict == Verdict::non_endogenous);
  CHECK(nv.gaps.back().normalized > 0.8);
  // Below it each coordinate of the pool leaves 1/2 for an outer root.
  EndogenyReport drift = endogeny_iterate(build_spec("noisy_voter", {{"eps", 0.1}}), half, c);
  const double low = *noisy_voter_low_root(0.1);
  for (int k : {0, 1}) {
    const double pk = drift.final_pool.marginal(k).stats().mean;
    CHECK(std::min(std::abs(pk - low), std::abs(pk - (1 - low))) < 0.02);
  }
}
