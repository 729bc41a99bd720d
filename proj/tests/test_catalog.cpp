#include <doctest.h>

#include <cmath>
#include <set>

#include "rde/catalog.hpp"
#include "rde/distance.hpp"
#include "rde/engine.hpp"
#include "rde/frozen.hpp"
#include "rde/roots.hpp"

using namespace rde;

TEST_CASE("registry is complete and buildable") {
  std::set<std::string> ids;
  for (const auto& e : registry()) {
    CAPTURE(e.id);
    CHECK(ids.insert(e.id).second);
    CHECK(!e.anchor.empty());
    if (e.id == "gw_matching_Z") continue;
    RdeSpec s = build_spec(e.id);
    CHECK(s.map);
    CHECK(s.name == e.id);
    SamplePool p = default_init(e.id, {}, 16, 1);
    for (const auto& v : p.values()) CHECK(s.state.contains(v));
  }
  CHECK(ids.size() >= 24);
  for (const char* want : {"lindley", "gw_progeny", "gw_height", "brw_range", "brw_greedy_L", "find_worstcase",
                           "discounted_brw", "perc_min", "species_extinction", "species_extinction_hom",
                           "gw_matching", "gw_matching_Z", "gw_indep_set", "quicksort", "brw_extreme",
                           "frozen_perc", "meanfield_subtree", "meanfield_matching", "meanfield_tsp",
                           "near_optimal_matching", "tsp_percolation", "fpp_flow", "regular_matching",
                           "noisy_voter", "mod2_shift", "fractal"})
    CHECK(ids.count(want) == 1);
  CHECK(find_entry("frozen_perc").oracle_kind == OracleKind::closed_cdf);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_spec("no_such_entry"), std::invalid_argument);
  CHECK_THROWS_AS(build_spec("lindley", {{"c", -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_spec("lindley", {{"nope", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_spec("lindley", {{"xi", 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_spec("lindley", {{"xi", std::string("weird:1")}}), std::invalid_argument);
  Params p = resolve_params(find_entry("lindley"), {{"c", 3.0}});
  CHECK(num(p, "c") == 3.0);
  CHECK(str(p, "xi") == "exp:1");
}

TEST_CASE("state spaces of built specs") {
  CHECK(build_spec("fpp_flow", {{"a", 0.5}}).state.lower == 0.0);
  CHECK(build_spec("near_optimal_matching").state.dim == 3);
  CHECK(build_spec("tsp_percolation").state.dim == 2);
  CHECK(build_spec("frozen_perc").state.allows_inf);
  SamplePool p = apply_T(default_init("fpp_flow", {{"a", 0.5}}, 5000, 1), build_spec("fpp_flow", {{"a", 0.5}}), 2);
  CHECK(p.stats().min >= 0.0);
}

TEST_CASE("oracle cdf examples") {
  CHECK(oracle_cdf("frozen_perc", {{"x0", 1.0}}, Value::infinity()) == doctest::Approx(0.5));
  CHECK(oracle_cdf("meanfield_matching", {{"d", 1.0}}, Value(0.0)) == doctest::Approx(0.5));
  CHECK(oracle_cdf("species_extinction_hom", {{"a", 1.0}}, Value(1.0)) == doctest::Approx(0.5));
  CHECK_THROWS(oracle_cdf("lindley", {}, Value(1.0)));
}

TEST_CASE("oracle cdfs are monotone and bounded") {
  for (const auto& e : registry()) {
    if (e.oracle_kind != OracleKind::closed_cdf) continue;
    Oracle o = oracle(e.id);
    if (!o.cdf) continue;
    CAPTURE(e.id);
    double prev = 0;
    for (double x = -20; x <= 60; x += 0.01) {
      double f = o.cdf(Value(x));
      CHECK(f >= prev - 1e-15);
      CHECK(f >= 0);
      CHECK(f <= 1);
      prev = f;
    }
    CHECK(o.cdf(Value::infinity()) <= 1.0);
  }
}

TEST_CASE("oracle constants") {
  CHECK(oracle_constant("meanfield_matching", {{"d", 1.0}}) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-9));
  CHECK(oracle_constant("gw_matching_exp") == doctest::Approx(0.714556).epsilon(1e-5));
  CHECK(oracle_constant("regular_matching", {{"r", 2.0}}) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(regular_matching_b(2) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  for (int r : {3, 4, 6}) {
    double b = regular_matching_b(r);
    CHECK(b == doctest::Approx(1 - (1 - std::pow(b, r)) / (r * (1 - b))).epsilon(1e-9));
  }
}

TEST_CASE("solve_root") {
  double c = solve_root([](double x) { return x * x + std::exp(-x) - 1; }, 0.1, 2.0);
  CHECK(c == doctest::Approx(0.7145563).epsilon(1e-6));
  CHECK(std::abs(c * c + std::exp(-c) - 1) < 1e-10);
  double w = 0.5;
  for (int i = 0; i < 200; ++i) w = std::exp(-w);
  CHECK(solve_root([](double x) { return x - std::exp(-x); }, 0.0, 1.0) == doctest::Approx(w).epsilon(1e-10));
  CHECK(solve_root([](double p) { return 16 * p * (1 - p) - 1; }, 0.0, 0.5) == doctest::Approx(0.0669873).epsilon(1e-6));
  CHECK_THROWS(solve_root([](double x) { return x * x + 1; }, -1.0, 1.0));
}

TEST_CASE("quicksort toll") {
  CHECK(quicksort_toll(0.0) == 1.0);
  CHECK(quicksort_toll(1.0) == 1.0);
  CHECK(quicksort_toll(0.5) == doctest::Approx(1 + 2 * std::log(0.5)));
  // Independent midpoint rule for E C(U)^2.
  const int n = 2000000;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    double u = (i + 0.5) / n;
    double c = 2 * u * std::log(u) + 2 * (1 - u) * std::log(1 - u) + 1;
    s += c * c;
  }
  CHECK(quicksort_toll_second_moment() == doctest::Approx(s / n).epsilon(1e-6));
}

TEST_CASE("noisy voter roots") {
  auto q = [](double p) { return p * p * p + 3 * p * p * (1 - p); };
  for (double eps : {0.0, 0.05, 0.1, 0.15}) {
    CAPTURE(eps);
    auto lo = noisy_voter_low_root(eps);
    REQUIRE(lo);
    CHECK(*lo < 0.5);
    CHECK(*lo == doctest::Approx((1 - eps) * q(*lo) + eps * (1 - q(*lo))).epsilon(1e-9));
  }
  CHECK(!noisy_voter_low_root(0.2));
  const double half = 0.5;
  CHECK((1 - 0.3) * q(half) + 0.3 * (1 - q(half)) == doctest::Approx(half));
}

TEST_CASE("gw_matching Bernoulli weights converge to the two-point law") {
  for (double p : {0.5, 1.0}) {
    CAPTURE(p);
    Params prm{{"nu", std::string("bernoulli:") + (p == 1.0 ? "1" : "0.5")}};
    RdeSpec s = build_spec("gw_matching", prm);
    IterateConfig c;
    c.tol = 0.002;
    auto [pool, rep] = iterate(s, default_init("gw_matching", prm, 100000, 1), c);
    double x = solve_root([p](double t) { return t - std::exp(-p * t); }, 0.0, 1.0);
    SamplePool target = SamplePool::sample(100000, [x](Rng& r) { return Value(r.uniform() < x ? 0.0 : 1.0); }, 2);
    CHECK(total_variation(pool, target) < 0.01);
  }
}

TEST_CASE("frozen_perc oracle family is stationary") {
  for (double x0 : {0.6, 0.8, 1.0}) {
    CAPTURE(x0);
    Params prm{{"x0", x0}};
    Oracle o = oracle("frozen_perc", prm);
    CHECK(o.atom_inf == doctest::Approx(1 / (2 * x0)));
    SamplePool p = SamplePool::sample(100000, o.sampler, 3);
    SamplePool out = apply_T(p, build_spec("frozen_perc", prm), 4);
    CHECK(ks_distance(out, p) < 0.01);
    CHECK(ks_to_cdf(out, [x0](double y) { return frozen_cdf(y, x0); }) < 0.01);
  }
}

TEST_CASE("regular matching has period two") {
  RdeSpec s = build_spec("regular_matching", {{"r", 2.0}});
  IterateConfig c;
  c.lag = 2;
  c.tol = 0.005;
  auto [p, rep] = iterate(s, default_init("regular_matching", {{"r", 2.0}}, 50000, 1), c);
  SamplePool two = apply_T(apply_T(p, s, 5), s, 6);
  CHECK(ks_distance(two, p) < 0.01);
}
