#include "rde/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rde/brw.hpp"
#include "rde/engine.hpp"
#include "rde/frozen.hpp"
#include "rde/laws.hpp"
#include "rde/roots.hpp"

namespace rde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- noise builders ----

NoiseLaw fixed_arity(std::int64_t k, const Law& xi) {
  NoiseLaw n;
  n.arity = [k](Rng&) { return k; };
  auto s = xi.sample;
  n.term = [s](Rng& r, std::size_t, double) { return s(r); };
  return n;
}

NoiseLaw random_arity(const Law& N, const Law& xi) {
  NoiseLaw n;
  auto sn = N.sample;
  n.arity = [sn](Rng& r) { return std::int64_t(sn(r)); };
  auto s = xi.sample;
  n.term = [s](Rng& r, std::size_t, double) { return s(r); };
  return n;
}

// Points of a Poisson process on (0, inf) with mean measure x^d / d.
NoiseLaw poisson_process(double d = 1.0) {
  NoiseLaw n;
  n.arity = [](Rng&) { return kUnbounded; };
  if (d == 1.0) {
    n.term = [](Rng& r, std::size_t, double prev) { return prev + r.exponential(); };
  } else {
    n.term = [d](Rng& r, std::size_t, double prev) {
      double g = std::pow(prev, d) / d + r.exponential();
      return std::max(std::pow(d * g, 1.0 / d), std::nextafter(prev, kInf));
    };
  }
  return n;
}

void with_extras(NoiseLaw& n, int k, std::function<void(Rng&, double*)> f) {
  n.n_extra = k;
  n.extra = std::move(f);
}

Law law_param(const Params& p, const std::string& key) { return parse_law(str(p, key)); }

SamplePool zeros(const Params&, std::size_t n, std::uint64_t) { return SamplePool::constant(Value(0.0), n); }

std::function<SamplePool(const Params&, std::size_t, std::uint64_t)> uniform_init(double a, double b) {
  return [a, b](const Params&, std::size_t n, std::uint64_t seed) {
    return SamplePool::sample(n, [a, b](Rng& r) { return Value(a + (b - a) * r.uniform()); }, seed);
  };
}

double logistic_cdf(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---- entries ----

std::vector<CatalogEntry> make_registry() {
  std::vector<CatalogEntry> R;

  // Lindley waiting time.
  R.push_back({"lindley",
               {{"c", 2.0, 0.0, 1e6, "service spacing"}, {"xi", std::string("exp:1"), 0, 0, "inter-arrival law"}},
               "R+",
               "X = max(0, X + xi - c)",
               OracleKind::reference_simulation,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "lindley";
                 s.state = StateSpace::nonneg();
                 s.noise = fixed_arity(1, law_param(p, "xi"));
                 const double c = num(p, "c");
                 s.map = [c](NoiseDraw& nd, Children& k, EvalContext&) {
                   return Value(std::max(0.0, k.at(0)[0] + nd.term(0) - c));
                 };
                 s.monotone = true;
                 s.mean_arity = 1;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::reference_simulation;
                 Law xi = law_param(p, "xi");
                 const double c = num(p, "c");
                 if (!(c > xi.mean)) throw std::invalid_argument("lindley oracle needs c > E xi");
                 const double gap = c - xi.mean;
                 const auto horizon = std::size_t(std::ceil(40.0 * std::max(xi.variance, 1e-3) / (gap * gap))) + 100;
                 o.sampler = [xi, c, horizon](Rng& r) {
                   double s = 0, best = 0;
                   for (std::size_t j = 0; j < horizon; ++j) {
                     s += xi.sample(r) - c;
                     best = std::max(best, s);
                   }
                   return Value(best);
                 };
                 o.description = "maximum of the random walk sum (xi_i - c) over a long horizon";
                 return o;
               },
               zeros});

  // Galton-Watson total progeny.
  R.push_back({"gw_progeny",
               {{"N", std::string("bernoulli:0.5"), 0, 0, "offspring law"}},
               "Z+",
               "X = 1 + sum_{i<=N} X_i",
               OracleKind::constant,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "gw_progeny";
                 s.state = StateSpace::integers_from(0, "Z+");
                 Law N = law_param(p, "N");
                 if (!N.integer) throw std::invalid_argument("gw_progeny: N must be integer valued");
                 s.noise = random_arity(N, parse_law("const:0"));
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double x = 1;
                   for (std::int64_t i = 0; i < nd.arity(); ++i) x += k.at(std::size_t(i))[0];
                   return Value(x);
                 };
                 s.monotone = true;
                 s.mean_arity = N.mean;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::constant;
                 Law N = law_param(p, "N");
                 if (!(N.mean < 1)) throw std::invalid_argument("gw_progeny oracle needs E N < 1");
                 o.constant = 1.0 / (1.0 - N.mean);
                 o.constant_name = "mean total progeny";
                 if (N.text.rfind("bernoulli", 0) == 0) {
                   // Bernoulli offspring gives a geometric progeny on {1, 2, ...}.
                   const double q = N.mean;
                   o.cdf = [q](const Value& x) {
                     if (x.is_inf()) return 1.0;
                     double k = std::floor(x[0]);
                     return k < 1 ? 0.0 : 1.0 - std::pow(q, k);
                   };
                   o.sampler = [q](Rng& r) {
                     double k = 1;
                     while (r.uniform() < q) ++k;
                     return Value(k);
                   };
                 }
                 return o;
               },
               zeros});

  // Galton-Watson height.
  R.push_back({"gw_height",
               {{"N", std::string("bernoulli:0.5"), 0, 0, "offspring law"}},
               "{1,2,...}",
               "H = 1 + max(H_1, ..., H_N), empty max 0",
               OracleKind::closed_cdf,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "gw_height";
                 s.state = StateSpace::integers_from(0, "{1,2,...}");
                 Law N = law_param(p, "N");
                 if (!N.integer) throw std::invalid_argument("gw_height: N must be integer valued");
                 s.noise = random_arity(N, parse_law("const:0"));
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double m = 0;
                   for (std::int64_t i = 0; i < nd.arity(); ++i) m = std::max(m, k.at(std::size_t(i))[0]);
                   return Value(1 + m);
                 };
                 s.monotone = true;
                 s.mean_arity = N.mean;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::closed_cdf;
                 Law N = law_param(p, "N");
                 if (!N.pgf) throw std::invalid_argument("gw_height oracle needs an offspring pgf");
                 // F_k = phi(F_{k-1}), F_0 = 0, tabulated until it settles.
                 auto F = std::make_shared<std::vector<double>>(1, 0.0);
                 for (int k = 1; k < 100000; ++k) {
                   double f = N.pgf(F->back());
                   F->push_back(f);
                   if (std::abs(f - (*F)[F->size() - 2]) < 1e-15) break;
                 }
                 const double limit = F->back();
                 o.atom_inf = 1 - limit;
                 o.cdf = [F, limit](const Value& x) {
                   if (x.is_inf()) return limit;
                   if (x[0] < 1) return 0.0;
                   const double k = std::floor(x[0]);
                   return k < double(F->size()) ? (*F)[std::size_t(k)] : limit;
                 };
                 o.sampler = [F](Rng& r) {
                   double u = r.uniform();
                   auto it = std::upper_bound(F->begin(), F->end(), u);
                   if (it == F->end()) return Value::infinity();
                   return Value(double(it - F->begin()));
                 };
                 o.description = "F_k = pgf(F_{k-1}), F_0 = 0";
                 return o;
               },
               zeros});

  // Range of a killed BRW.
  R.push_back({"brw_range",
               {{"N", std::string("const:2"), 0, 0, "offspring law"},
                {"xi", std::string("normal:-2:1"), 0, 0, "displacement law"}},
               "R+",
               "R = max(0, max_i (R_i + xi_i))",
               OracleKind::reference_simulation,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "brw_range";
                 s.state = StateSpace::nonneg();
                 Law N = law_param(p, "N");
                 s.noise = random_arity(N, law_param(p, "xi"));
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double m = 0;
                   for (std::int64_t i = 0; i < nd.arity(); ++i)
                     m = std::max(m, k.at(std::size_t(i))[0] + nd.term(std::size_t(i)));
                   return Value(m);
                 };
                 s.monotone = true;
                 s.mean_arity = N.mean;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::reference_simulation;
                 BrwSpec b = make_brw(str(p, "N"), str(p, "xi"));
                 if (!(b.gamma() < 0)) throw std::invalid_argument("brw_range oracle needs a negative speed");
                 o.sampler = [b](Rng& r) { return Value(brw_range_sample(b, 200, 2000, r())); };
                 o.description = "max over 200 generations of the rightmost BRW particle";
                 return o;
               },
               zeros});

  // Greedy search in BRW.
  R.push_back({"brw_greedy_L",
               {{"xi", std::string("pm1:0.3"), 0, 0, "displacement law"}},
               "(-inf,0]",
               "L = min(0, max_i (L_i + xi_i)), binary",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "brw_greedy_L";
                 s.state = StateSpace::nonpos();
                 s.noise = fixed_arity(2, law_param(p, "xi"));
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double m = std::max(k.at(0)[0] + nd.term(0), k.at(1)[0] + nd.term(1));
                   return Value(std::min(0.0, m));
                 };
                 s.mean_arity = 2;
                 return s;
               },
               nullptr, zeros});

  // Worst-case FIND.
  R.push_back({"find_worstcase",
               {},
               "R+",
               "X = 1 + max(U X_1, (1-U) X_2)",
               OracleKind::none,
               [](const Params&) {
                 RdeSpec s;
                 s.name = "find_worstcase";
                 s.state = StateSpace::nonneg();
                 s.noise = fixed_arity(2, parse_law("const:0"));
                 with_extras(s.noise, 1, [](Rng& r, double* e) { e[0] = r.uniform(); });
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double u = nd.extra(0);
                   return Value(1 + std::max(u * k.at(0)[0], (1 - u) * k.at(1)[0]));
                 };
                 s.monotone = true;
                 s.mean_arity = 2;
                 return s;
               },
               nullptr, zeros});

  // Discounted BRW sum.
  R.push_back({"discounted_brw",
               {{"c", 0.5, 0.0, 100.0, "discount"},
                {"eta", std::string("exp:1"), 0, 0, "node weight law"},
                {"N", std::string("const:2"), 0, 0, "offspring law"}},
               "R+",
               "X = eta + c max(X_1, ..., X_N)",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "discounted_brw";
                 s.state = StateSpace::nonneg();
                 Law N = law_param(p, "N");
                 Law eta = law_param(p, "eta");
                 if (eta.lo < 0) throw std::invalid_argument("discounted_brw: eta must be nonnegative");
                 s.noise = random_arity(N, parse_law("const:0"));
                 with_extras(s.noise, 1, [eta](Rng& r, double* e) { e[0] = eta.sample(r); });
                 const double c = num(p, "c");
                 s.map = [c](NoiseDraw& nd, Children& k, EvalContext&) {
                   double m = 0;
                   for (std::int64_t i = 0; i < nd.arity(); ++i) m = std::max(m, k.at(std::size_t(i))[0]);
                   return Value(nd.extra(0) + c * m);
                 };
                 s.monotone = true;
                 s.mean_arity = N.mean;
                 return s;
               },
               nullptr, zeros});

  // Minimum of discounted children (percolation flavour).
  R.push_back({"perc_min",
               {{"c", 0.5, 0.0, 100.0, "discount"}, {"eta", std::string("exp:1"), 0, 0, "node weight law"}},
               "R+",
               "X = eta + c min(X_1, X_2)",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "perc_min";
                 s.state = StateSpace::nonneg();
                 Law eta = law_param(p, "eta");
                 if (eta.lo < 0) throw std::invalid_argument("perc_min: eta must be nonnegative");
                 s.noise = fixed_arity(2, parse_law("const:0"));
                 with_extras(s.noise, 1, [eta](Rng& r, double* e) { e[0] = eta.sample(r); });
                 const double c = num(p, "c");
                 s.map = [c](NoiseDraw& nd, Children& k, EvalContext&) {
                   return Value(nd.extra(0) + c * std::min(k.at(0)[0], k.at(1)[0]));
                 };
                 s.monotone = true;
                 s.mean_arity = 2;
                 return s;
               },
               nullptr, zeros});

  // Species extinction times.
  auto species_map = [](bool with_eta) {
    return [with_eta](NoiseDraw& nd, Children& k, EvalContext& ctx) {
      const double hi = k.bounds(0).hi;
      double best = 0;
      scan_terms(
          nd, k, ctx,
          [&](std::size_t i) { best = std::max(best, std::exp(-nd.term(i)) * k.at(i)[0]); },
          [&](double next) { return std::exp(-next) * hi <= best; });
      return Value((with_eta ? nd.extra(0) : 0.0) + best);
    };
  };
  R.push_back({"species_extinction",
               {{"eta", std::string("exp:1"), 0, 0, "node weight law"}},
               "R+",
               "X = eta + max_i exp(-xi_i) X_i, xi a rate-1 Poisson process",
               OracleKind::none,
               [species_map](const Params& p) {
                 RdeSpec s;
                 s.name = "species_extinction";
                 s.state = StateSpace::nonneg();
                 Law eta = law_param(p, "eta");
                 if (eta.lo < 0) throw std::invalid_argument("species_extinction: eta must be nonnegative");
                 s.noise = poisson_process();
                 with_extras(s.noise, 1, [eta](Rng& r, double* e) { e[0] = eta.sample(r); });
                 s.map = species_map(true);
                 s.truncation = Truncation::adaptive;
                 s.monotone = true;
                 s.mean_arity = HUGE_VAL;
                 return s;
               },
               nullptr, zeros});

  R.push_back({"species_extinction_hom",
               {{"a", 1.0, 1e-9, 1e9, "scale of the fixed point"}},
               "R+",
               "X = max_i exp(-xi_i) X_i, xi a rate-1 Poisson process",
               OracleKind::closed_cdf,
               [species_map](const Params&) {
                 RdeSpec s;
                 s.name = "species_extinction_hom";
                 s.state = StateSpace::nonneg();
                 s.noise = poisson_process();
                 s.map = species_map(false);
                 s.truncation = Truncation::adaptive;
                 s.monotone = true;
                 s.mean_arity = HUGE_VAL;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::closed_cdf;
                 const double a = num(p, "a");
                 o.cdf = [a](const Value& x) { return x.is_inf() ? 1.0 : (x[0] <= 0 ? 0.0 : x[0] / (a + x[0])); };
                 o.sampler = [a](Rng& r) {
                   double u = r.uniform();
                   return Value(a * u / (1 - u));
                 };
                 o.description = "P(X <= x) = x / (a + x)";
                 return o;
               },
               [](const Params& p, std::size_t n, std::uint64_t seed) {
                 return SamplePool::sample(n, oracle("species_extinction_hom", p).sampler, seed);
               }});

  // Maximal matching on a GW tree.
  auto gw_matching_build = [](const Params& p, const std::string& name) {
    RdeSpec s;
    s.name = name;
    s.state = StateSpace::nonneg();
    Law N = law_param(p, "N");
    s.noise = random_arity(N, law_param(p, "nu"));
    s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
      double m = 0;
      for (std::int64_t i = 0; i < nd.arity(); ++i) m = std::max(m, nd.term(std::size_t(i)) - k.at(std::size_t(i))[0]);
      return Value(m);
    };
    s.mean_arity = N.mean;
    return s;
  };
  auto gw_matching_exp_constant = [] {
    return solve_root([](double c) { return c * c + std::exp(-c) - 1; }, 0.1, 2.0);
  };
  auto gw_matching_oracle = [gw_matching_exp_constant](const Params& p) {
    Oracle o;
    const std::string N = str(p, "N"), nu = str(p, "nu");
    Law nl = parse_law(nu);
    if ((N == "poisson:1" || N == "poisson") && (nu == "exp:1" || nu == "exp")) {
      o.kind = OracleKind::closed_cdf;
      const double c = gw_matching_exp_constant();
      o.constant = c;
      o.constant_name = "c with c^2 + exp(-c) = 1";
      o.root_f = [](double c) { return c * c + std::exp(-c) - 1; };
      o.root_lo = 0.1;
      o.root_hi = 2.0;
      o.cdf = [c](const Value& x) { return x.is_inf() ? 1.0 : (x[0] < 0 ? 0.0 : std::exp(-c * std::exp(-x[0]))); };
      o.sampler = [c](Rng& r) {
        double u = r.uniform_open();
        // Invert exp(-c e^{-x}) above its atom at 0.
        return Value(u <= std::exp(-c) ? 0.0 : -std::log(-std::log(u) / c));
      };
      o.description = "P(X <= x) = exp(-c e^{-x})";
    } else if ((N == "poisson:1" || N == "poisson") && nu.rfind("bernoulli", 0) == 0) {
      o.kind = OracleKind::closed_cdf;
      const double pp = nl.mean;
      const double x0 = solve_root([pp](double x) { return x - std::exp(-pp * x); }, 0.0, 1.0);
      o.constant = x0;
      o.constant_name = "P(X = 0), x = exp(-p x)";
      o.cdf = [x0](const Value& x) { return x.is_inf() ? 1.0 : (x[0] < 0 ? 0.0 : (x[0] < 1 ? x0 : 1.0)); };
      o.sampler = [x0](Rng& r) { return Value(r.uniform() < x0 ? 0.0 : 1.0); };
      o.description = "Bernoulli(1 - x) with x = exp(-p x)";
    } else {
      throw std::invalid_argument("gw_matching: oracle only for Poisson(1) offspring with exp:1 or bernoulli weights");
    }
    return o;
  };
  R.push_back({"gw_matching",
               {{"N", std::string("poisson:1"), 0, 0, "offspring law"},
                {"nu", std::string("exp:1"), 0, 0, "edge weight law"}},
               "R+",
               "X = max(0, xi_i - X_i, 1 <= i <= N)",
               OracleKind::closed_cdf,
               [gw_matching_build](const Params& p) { return gw_matching_build(p, "gw_matching"); },
               gw_matching_oracle, zeros});
  R.push_back({"gw_matching_exp",
               {{"N", std::string("poisson:1"), 0, 0, "offspring law (fixed)"},
                {"nu", std::string("exp:1"), 0, 0, "edge weight law (fixed)"}},
               "R+",
               "X = max(0, xi_i - X_i, 1 <= i <= N), Poisson(1) offspring, Exp(1) weights",
               OracleKind::root_equation,
               [gw_matching_build](const Params& p) {
                 if (str(p, "N") != "poisson:1" || str(p, "nu") != "exp:1")
                   throw std::invalid_argument("gw_matching_exp: parameters are fixed");
                 return gw_matching_build(p, "gw_matching_exp");
               },
               [gw_matching_oracle](const Params& p) {
                 Oracle o = gw_matching_oracle(p);
                 o.kind = OracleKind::root_equation;
                 return o;
               },
               zeros});

  // Auxiliary Z of the GW matching limit, X an exogenous frozen pool.
  R.push_back({"gw_matching_Z",
               {{"N", std::string("poisson:1"), 0, 0, "offspring law of the X recursion"},
                {"nu", std::string("exp:1"), 0, 0, "edge weight law"},
                {"x_pool", 20000.0, 100, 1e7, "size of the frozen X pool"},
                {"x_iters", 100.0, 1, 10000, "generations used to build the X pool"},
                {"x_seed", 7.0, 0, 1e18, "seed of the X pool"}},
               "R+",
               "Z = max(X, xi - Z_1), X from the gw_matching fixed point",
               OracleKind::none,
               [gw_matching_build](const Params& p) {
                 // X first: the Z recursion only makes sense against a frozen X law.
                 RdeSpec xs = gw_matching_build(p, "gw_matching");
                 IterateConfig cfg;
                 cfg.max_iters = int(num(p, "x_iters"));
                 cfg.tol = 1e-9;
                 cfg.seed = std::uint64_t(num(p, "x_seed"));
                 auto [xpool, rep] = iterate(xs, SamplePool::constant(Value(0.0), std::size_t(num(p, "x_pool"))), cfg);
                 RdeSpec s;
                 s.name = "gw_matching_Z";
                 s.state = StateSpace::nonneg();
                 s.noise = fixed_arity(1, law_param(p, "nu"));
                 s.noise.cross_ref = std::make_shared<const SamplePool>(std::move(xpool));
                 s.noise.n_cross = 1;
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   return Value(std::max(nd.cross(0)[0], nd.term(0) - k.at(0)[0]));
                 };
                 s.mean_arity = 1;
                 return s;
               },
               nullptr, zeros});

  // Independent set on a GW tree.
  R.push_back({"gw_indep_set",
               {{"N", std::string("poisson:1"), 0, 0, "offspring law"},
                {"nu", std::string("exp:1"), 0, 0, "vertex weight law"}},
               "R+",
               "X = max(0, xi - sum_{i<=N} X_i)",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "gw_indep_set";
                 s.state = StateSpace::nonneg();
                 Law N = law_param(p, "N");
                 Law nu = law_param(p, "nu");
                 s.noise = random_arity(N, parse_law("const:0"));
                 with_extras(s.noise, 1, [nu](Rng& r, double* e) { e[0] = nu.sample(r); });
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double sum = 0;
                   for (std::int64_t i = 0; i < nd.arity(); ++i) sum += k.at(std::size_t(i))[0];
                   return Value(std::max(0.0, nd.extra(0) - sum));
                 };
                 s.mean_arity = N.mean;
                 return s;
               },
               nullptr, zeros});

  // Quicksort.
  R.push_back({"quicksort",
               {},
               "R",
               "X = U X_1 + (1-U) X_2 + C(U)",
               OracleKind::constant,
               [](const Params&) {
                 RdeSpec s;
                 s.name = "quicksort";
                 s.state = StateSpace::reals();
                 s.noise = fixed_arity(2, parse_law("const:0"));
                 with_extras(s.noise, 1, [](Rng& r, double* e) { e[0] = r.uniform(); });
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double u = nd.extra(0);
                   return Value(u * k.at(0)[0] + (1 - u) * k.at(1)[0] + quicksort_toll(u));
                 };
                 s.eq_tol = 0.05;
                 s.mean_arity = 2;
                 return s;
               },
               [](const Params&) {
                 Oracle o;
                 o.kind = OracleKind::constant;
                 o.constant = 3.0 * quicksort_toll_second_moment();
                 o.constant_name = "second moment of the centred fixed point, 3 E[C(U)^2]";
                 return o;
               },
               zeros});

  // BRW extremes seen from the tip.
  R.push_back({"brw_extreme",
               {{"gamma", 1.1774100225154747, -1e6, 1e6, "centering speed"},
                {"N", std::string("const:2"), 0, 0, "offspring law"},
                {"xi", std::string("normal:0:1"), 0, 0, "displacement law"}},
               "R",
               "X = -gamma + max_i (xi_i + X_i)",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "brw_extreme";
                 s.state = StateSpace::reals();
                 Law N = law_param(p, "N");
                 s.noise = random_arity(N, law_param(p, "xi"));
                 const double g = num(p, "gamma");
                 s.map = [g](NoiseDraw& nd, Children& k, EvalContext&) {
                   double m = -kInf;
                   for (std::int64_t i = 0; i < nd.arity(); ++i)
                     m = std::max(m, nd.term(std::size_t(i)) + k.at(std::size_t(i))[0]);
                   return Value(m == -kInf ? m : m - g);
                 };
                 s.eq_tol = 0.05;
                 s.mean_arity = N.mean;
                 return s;
               },
               nullptr, zeros});

  // Frozen percolation join times.
  R.push_back({"frozen_perc",
               {{"x0", 1.0, 0.5, 1.0, "top of the finite support in the oracle family"}},
               "[1/2,1] u {inf}",
               "Y = Phi(min(Y_1, Y_2), U), Phi(x, u) = x if x > u else inf",
               OracleKind::closed_cdf,
               [](const Params&) {
                 RdeSpec s;
                 s.name = "frozen_perc";
                 s.state = StateSpace::interval_with_inf(0.5, 1.0, "[1/2,1] u {inf}");
                 s.noise = fixed_arity(2, parse_law("const:0"));
                 with_extras(s.noise, 1, [](Rng& r, double* e) { e[0] = r.uniform(); });
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   const Value a = k.at(0);
                   const Value m = ext_min(a, k.at(1));
                   if (m.is_inf() || m[0] > nd.extra(0)) return m;
                   return Value::infinity();
                 };
                 s.mean_arity = 2;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::closed_cdf;
                 const double x0 = num(p, "x0");
                 o.atom_inf = frozen_atom(x0);
                 o.cdf = [x0](const Value& y) { return frozen_cdf(y.as_double(), x0); };
                 o.sampler = [x0](Rng& r) {
                   double u = r.uniform();
                   if (u >= 1 - frozen_atom(x0)) return Value::infinity();
                   return Value(1 / (2 * (1 - u)));
                 };
                 o.description = "P(Y <= y) = 1 - 1/(2y) on [1/2, x0], atom 1/(2 x0) at infinity";
                 return o;
               },
               uniform_init(0.5, 1.0)});

  // Mean-field minimal spanning subtree.
  R.push_back({"meanfield_subtree",
               {{"c", 0.2, 0.0, 10.0, "cost offset"}},
               "R+",
               "Y = sum_i (c - xi_i + Y_i)^+, xi a rate-1 Poisson process",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "meanfield_subtree";
                 s.state = StateSpace::nonneg();
                 s.noise = poisson_process();
                 const double c = num(p, "c");
                 s.map = [c](NoiseDraw& nd, Children& k, EvalContext& ctx) {
                   const double hi = k.bounds(0).hi;
                   double sum = 0;
                   scan_terms(
                       nd, k, ctx, [&](std::size_t i) { sum += std::max(0.0, c - nd.term(i) + k.at(i)[0]); },
                       [&](double next) { return next >= c + hi; });
                   return Value(sum);
                 };
                 s.truncation = Truncation::adaptive;
                 s.monotone = true;
                 s.divergence_ceiling = 50.0;
                 s.mean_arity = HUGE_VAL;
                 return s;
               },
               nullptr, zeros});

  // Mean-field matching in pseudo-dimension d.
  R.push_back({"meanfield_matching",
               {{"d", 1.0, 0.05, 20.0, "pseudo-dimension"}},
               "R",
               "X = min_i (xi_i - X_i), xi Poisson with rate x^{d-1}",
               OracleKind::closed_cdf,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "meanfield_matching";
                 s.translation_antitone = true;
                 s.state = StateSpace::reals();
                 s.noise = poisson_process(num(p, "d"));
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext& ctx) {
                   const double hi = k.bounds(0).hi;
                   double best = kInf;
                   scan_terms(
                       nd, k, ctx, [&](std::size_t i) { best = std::min(best, nd.term(i) - k.at(i)[0]); },
                       [&](double next) { return next - hi >= best; });
                   return Value(best);
                 };
                 s.truncation = Truncation::adaptive;
                 s.eq_tol = 0.05;
                 s.mean_arity = HUGE_VAL;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 const double d = num(p, "d");
                 if (d != 1.0) {
                   o.kind = OracleKind::reference_simulation;
                   o.description = "no closed form away from d = 1; use iterate";
                   return o;
                 }
                 o.kind = OracleKind::closed_cdf;
                 o.cdf = [](const Value& x) { return x.is_inf() ? 1.0 : logistic_cdf(x[0]); };
                 o.sampler = [](Rng& r) {
                   double u = r.uniform_open();
                   return Value(std::log(u / (1 - u)));
                 };
                 o.constant = std::numbers::pi * std::numbers::pi / 6;
                 o.constant_name = "limit mean edge length, integral of x P(X_1 + X_2 > x)";
                 o.description = "logistic law 1/(1 + e^{-x})";
                 return o;
               },
               uniform_init(-1, 1)});

  // Mean-field TSP: second minimum.
  R.push_back({"meanfield_tsp",
               {{"d", 1.0, 0.05, 20.0, "pseudo-dimension"}},
               "R",
               "X = second min_i (xi_i - X_i), xi Poisson with rate x^{d-1}",
               OracleKind::constant,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "meanfield_tsp";
                 s.translation_antitone = true;
                 s.state = StateSpace::reals();
                 s.noise = poisson_process(num(p, "d"));
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext& ctx) {
                   const double hi = k.bounds(0).hi;
                   double m1 = kInf, m2 = kInf;
                   scan_terms(
                       nd, k, ctx,
                       [&](std::size_t i) {
                         double v = nd.term(i) - k.at(i)[0];
                         if (v < m1) {
                           m2 = m1;
                           m1 = v;
                         } else if (v < m2) {
                           m2 = v;
                         }
                       },
                       // Both smallest terms must be final.
                       [&](double next) { return next - hi >= m2; });
                   return Value(m2);
                 };
                 s.truncation = Truncation::adaptive;
                 s.eq_tol = 0.05;
                 s.mean_arity = HUGE_VAL;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 if (num(p, "d") != 1.0) {
                   o.kind = OracleKind::reference_simulation;
                   return o;
                 }
                 o.kind = OracleKind::constant;
                 o.constant = 2.04;
                 o.constant_name = "limit tour length per vertex (approximate)";
                 return o;
               },
               uniform_init(-1, 1)});

  // Near-optimal matching, R^3 state.
  R.push_back({"near_optimal_matching",
               {{"lambda", 0.5, 0.0, 100.0, "Lagrange multiplier"}},
               "R^3",
               "(X,Y,Z) = (min(xi_i - X_i), min(xi_i - (Z_i + lambda) 1(i = i*) - Y_i 1(i != i*)), min(xi_i - Y_i))",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "near_optimal_matching";
                 s.state = StateSpace::vectors(3, "R^3");
                 s.noise = poisson_process();
                 const double lam = num(p, "lambda");
                 s.map = [lam](NoiseDraw& nd, Children& k, EvalContext& ctx) {
                   const double hx = k.bounds(0).hi, hy = k.bounds(1).hi, hz = k.bounds(2).hi;
                   double bx = kInf, bz = kInf;
                   std::size_t istar = 0;
                   std::size_t used = 0;
                   double by_rest = kInf;  // Y terms assuming i != i*, settled after i* is known
                   scan_terms(
                       nd, k, ctx,
                       [&](std::size_t i) {
                         const Value& c = k.at(i);
                         double t = nd.term(i);
                         if (t - c[0] < bx) {  // strict: lowest index wins ties
                           bx = t - c[0];
                           istar = i;
                         }
                         bz = std::min(bz, t - c[1]);
                         used = i + 1;
                       },
                       [&](double next) {
                         // X final, Z final, and Y's unvisited terms (all i != i*) cannot undercut.
                         double ybound = kInf;
                         for (std::size_t i = 0; i < used; ++i) {
                           const Value& c = k.at(i);
                           double t = nd.term(i);
                           ybound = std::min(ybound, i == istar ? t - (c[2] + lam) : t - c[1]);
                         }
                         by_rest = ybound;
                         return next - hx >= bx && next - hy >= bz && next - hy >= ybound;
                       });
                   // Recompute Y over visited terms; the stopping rule certified the rest.
                   double by = kInf;
                   for (std::size_t i = 0; i < used; ++i) {
                     const Value& c = k.at(i);
                     double t = nd.term(i);
                     by = std::min(by, i == istar ? t - (c[2] + lam) : t - c[1]);
                   }
                   (void)by_rest;
                   (void)hz;
                   return Value::vec3(bx, by, bz);
                 };
                 s.truncation = Truncation::adaptive;
                 s.eq_tol = 0.05;
                 s.mean_arity = HUGE_VAL;
                 return s;
               },
               nullptr,
               [](const Params&, std::size_t n, std::uint64_t seed) {
                 return SamplePool::sample(
                     n,
                     [](Rng& r) {
                       return Value::vec3(2 * r.uniform() - 1, 2 * r.uniform() - 1, 2 * r.uniform() - 1);
                     },
                     seed);
               }});

  // TSP percolation function, R^2 state.
  R.push_back({"tsp_percolation",
               {{"lambda", 0.5, 0.0, 100.0, "Lagrange multiplier"}},
               "R^2",
               "(X,Z) = (max_i t_i, max_i t_i + second max_i t_i), t_i = lambda - xi_i + X_i - Z_i^+",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "tsp_percolation";
                 s.state = StateSpace::vectors(2, "R^2");
                 s.noise = poisson_process();
                 const double lam = num(p, "lambda");
                 s.map = [lam](NoiseDraw& nd, Children& k, EvalContext& ctx) {
                   // Upper bound on X_i - Z_i^+ over the pool.
                   const double wmax = k.bounds(0).hi - std::max(0.0, k.bounds(1).lo);
                   double m1 = -kInf, m2 = -kInf;
                   scan_terms(
                       nd, k, ctx,
                       [&](std::size_t i) {
                         const Value& c = k.at(i);
                         double t = lam - nd.term(i) + c[0] - std::max(0.0, c[1]);
                         if (t > m1) {
                           m2 = m1;
                           m1 = t;
                         } else if (t > m2) {
                           m2 = t;
                         }
                       },
                       [&](double next) { return lam - next + wmax <= m2; });
                   return Value::vec2(m1, m1 + m2);
                 };
                 s.truncation = Truncation::adaptive;
                 s.eq_tol = 0.05;
                 s.mean_arity = HUGE_VAL;
                 return s;
               },
               nullptr,
               [](const Params&, std::size_t n, std::uint64_t) { return SamplePool::constant(Value::vec2(0, 0), n); }});

  // Mean-field first-passage flow.
  R.push_back({"fpp_flow",
               {{"a", 0.5, 0.0, 100.0, "time offset"}},
               "R+",
               "Z = min(A_2, A_3, A_1 + A_2 + A_3) - min(0, A_1 + A_2, A_1 + A_3), A_i = Z_i + xi_i - a",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "fpp_flow";
                 s.state = StateSpace::nonneg();
                 s.noise = fixed_arity(3, parse_law("exp:1"));
                 const double a = num(p, "a");
                 s.map = [a](NoiseDraw& nd, Children& k, EvalContext&) {
                   double A[3];
                   for (int i = 0; i < 3; ++i) A[i] = k.at(std::size_t(i))[0] + nd.term(std::size_t(i)) - a;
                   double z = std::min({A[1], A[2], A[0] + A[1] + A[2]}) - std::min({0.0, A[0] + A[1], A[0] + A[2]});
                   return Value(std::max(0.0, z));
                 };
                 s.mean_arity = 3;
                 return s;
               },
               nullptr, zeros});

  // Matching on random r-regular graphs.
  R.push_back({"regular_matching",
               {{"r", 2.0, 2, 50, "degree"}},
               "R+",
               "X = max(0, xi_i - X_i, 1 <= i <= r-1), xi Exp(1)",
               OracleKind::constant,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "regular_matching";
                 s.state = StateSpace::nonneg();
                 const double r = num(p, "r");
                 if (r != std::floor(r)) throw std::invalid_argument("regular_matching: r must be an integer");
                 s.noise = fixed_arity(std::int64_t(r) - 1, parse_law("exp:1"));
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double m = 0;
                   for (std::int64_t i = 0; i < nd.arity(); ++i)
                     m = std::max(m, nd.term(std::size_t(i)) - k.at(std::size_t(i))[0]);
                   return Value(m);
                 };
                 s.mean_arity = r - 1;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::constant;
                 const int r = int(num(p, "r"));
                 const double b = regular_matching_b(r);
                 o.constant = b;
                 o.constant_name = "b, with P(X = 0) = b^{r-1}";
                 o.root_f = [r](double b) { return b - 1 + (1 - std::pow(b, r)) / (r * (1 - b)); };
                 o.root_lo = 1e-9;
                 o.root_hi = 1 - 1e-9;
                 // Fixed point: P(X <= x) = (1 - (1-b) e^{-x})^{r-1}.
                 o.cdf = [b, r](const Value& x) {
                   return x.is_inf() ? 1.0 : (x[0] < 0 ? 0.0 : std::pow(1 - (1 - b) * std::exp(-x[0]), r - 1));
                 };
                 o.sampler = [b, r](Rng& rng) {
                   double u = rng.uniform_open();
                   double v = std::pow(u, 1.0 / (r - 1));
                   return Value(v <= b ? 0.0 : -std::log((1 - v) / (1 - b)));
                 };
                 return o;
               },
               zeros});

  // Noisy voter majority.
  R.push_back({"noisy_voter",
               {{"eps", 0.1, 0.0, 0.5, "flip probability"}},
               "{0,1}",
               "X = xi + 1(X_1 + X_2 + X_3 >= 2) mod 2, xi Bern(eps)",
               OracleKind::root_equation,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "noisy_voter";
                 s.state = StateSpace::binary();
                 s.noise = fixed_arity(3, parse_law("const:0"));
                 const double eps = num(p, "eps");
                 with_extras(s.noise, 1, [eps](Rng& r, double* e) { e[0] = r.uniform() < eps ? 1 : 0; });
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   int votes = int(k.at(0)[0] + k.at(1)[0] + k.at(2)[0]);
                   int maj = votes >= 2 ? 1 : 0;
                   return Value(double((maj + int(nd.extra(0))) % 2));
                 };
                 s.mean_arity = 3;
                 return s;
               },
               [](const Params& p) {
                 Oracle o;
                 o.kind = OracleKind::root_equation;
                 const double eps = num(p, "eps");
                 o.root_f = [eps](double q) {
                   double m = q * q * q + 3 * q * q * (1 - q);
                   return (1 - eps) * m + eps * (1 - m) - q;
                 };
                 auto low = noisy_voter_low_root(eps);
                 o.constant = low ? *low : 0.5;
                 o.constant_name = "P(X = 1) at the lowest fixed point";
                 o.root_lo = 0;
                 o.root_hi = low ? 0.5 - 1e-3 : 1.0;
                 const double pp = *o.constant;
                 o.cdf = [pp](const Value& x) { return x.is_inf() ? 1.0 : (x[0] < 0 ? 0.0 : (x[0] < 1 ? 1 - pp : 1.0)); };
                 o.sampler = [pp](Rng& r) { return Value(r.uniform() < pp ? 1.0 : 0.0); };
                 return o;
               },
               zeros});

  // Shift register mod 2.
  R.push_back({"mod2_shift",
               {{"q", 0.3, 0.0, 1.0, "flip probability"}},
               "{0,1}",
               "X = X_{I+1} + xi mod 2, I Bern(1/2), xi Bern(q)",
               OracleKind::closed_cdf,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "mod2_shift";
                 s.state = StateSpace::binary();
                 s.noise = fixed_arity(2, parse_law("const:0"));
                 const double q = num(p, "q");
                 with_extras(s.noise, 2, [q](Rng& r, double* e) {
                   e[0] = r.uniform() < 0.5 ? 1 : 0;
                   e[1] = r.uniform() < q ? 1 : 0;
                 });
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   int x = int(k.at(std::size_t(nd.extra(0)))[0]);
                   return Value(double((x + int(nd.extra(1))) % 2));
                 };
                 s.mean_arity = 2;
                 return s;
               },
               [](const Params&) {
                 Oracle o;
                 o.kind = OracleKind::closed_cdf;
                 o.cdf = [](const Value& x) { return x.is_inf() ? 1.0 : (x[0] < 0 ? 0.0 : (x[0] < 1 ? 0.5 : 1.0)); };
                 o.sampler = [](Rng& r) { return Value(r.uniform() < 0.5 ? 1.0 : 0.0); };
                 o.description = "Bernoulli(1/2)";
                 return o;
               },
               zeros});

  // Random fractal graphs.
  R.push_back({"fractal",
               {{"p", 0.5, 0.0, 1.0, "probability of the halving branch"}},
               "R+",
               "X = 2 min(X_1, X_2) w.p. 1-p, else max(X_1, X_2)/2",
               OracleKind::none,
               [](const Params& p) {
                 RdeSpec s;
                 s.name = "fractal";
                 s.state = StateSpace::nonneg();
                 s.noise = fixed_arity(2, parse_law("const:0"));
                 const double pp = num(p, "p");
                 with_extras(s.noise, 1, [pp](Rng& r, double* e) { e[0] = r.uniform() < pp ? 1 : 0; });
                 s.map = [](NoiseDraw& nd, Children& k, EvalContext&) {
                   double a = k.at(0)[0], b = k.at(1)[0];
                   return Value(nd.extra(0) == 0 ? 2 * std::min(a, b) : 0.5 * std::max(a, b));
                 };
                 s.monotone = true;
                 s.mean_arity = 2;
                 return s;
               },
               nullptr, uniform_init(0.5, 2.0)});

  return R;
}

}  // namespace

const char* to_string(OracleKind k) {
  switch (k) {
    case OracleKind::none: return "none";
    case OracleKind::closed_cdf: return "closed_cdf";
    case OracleKind::constant: return "constant";
    case OracleKind::root_equation: return "root_equation";
    case OracleKind::reference_simulation: return "reference_simulation";
  }
  return "?";
}

const std::vector<CatalogEntry>& registry() {
  static const std::vector<CatalogEntry> R = make_registry();
  return R;
}

const CatalogEntry& find_entry(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown catalog entry '" + id + "'");
}

Params resolve_params(const CatalogEntry& e, const Params& given) {
  Params out;
  for (const auto& d : e.params) out[d.name] = d.dflt;
  for (const auto& [k, v] : given) {
    auto it = std::find_if(e.params.begin(), e.params.end(), [&](const ParamDef& d) { return d.name == k; });
    if (it == e.params.end()) throw std::invalid_argument(e.id + ": unknown parameter '" + k + "'");
    if (std::holds_alternative<double>(it->dflt)) {
      double x;
      if (std::holds_alternative<double>(v)) {
        x = std::get<double>(v);
      } else {
        const auto& s = std::get<std::string>(v);
        std::size_t used = 0;
        try {
          x = std::stod(s, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size()) throw std::invalid_argument(e.id + ": parameter '" + k + "' needs a number");
      }
      if (!(x >= it->lo && x <= it->hi)) {
        std::ostringstream os;
        os << e.id << ": parameter '" << k << "' = " << x << " outside [" << it->lo << ", " << it->hi << "]";
        throw std::invalid_argument(os.str());
      }
      out[k] = x;
    } else {
      if (!std::holds_alternative<std::string>(v))
        throw std::invalid_argument(e.id + ": parameter '" + k + "' needs a law such as exp:1");
      parse_law(std::get<std::string>(v));  // validates
      out[k] = v;
    }
  }
  return out;
}

double num(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end() || !std::holds_alternative<double>(it->second))
    throw std::invalid_argument("missing numeric parameter '" + key + "'");
  return std::get<double>(it->second);
}

std::string str(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end() || !std::holds_alternative<std::string>(it->second))
    throw std::invalid_argument("missing law parameter '" + key + "'");
  return std::get<std::string>(it->second);
}

RdeSpec build_spec(const std::string& id, const Params& params) {
  const auto& e = find_entry(id);
  return e.build(resolve_params(e, params));
}

Oracle oracle(const std::string& id, const Params& params) {
  const auto& e = find_entry(id);
  if (!e.oracle) throw std::invalid_argument(id + ": no oracle");
  return e.oracle(resolve_params(e, params));
}

double oracle_cdf(const std::string& id, const Params& params, const Value& x) {
  Oracle o = oracle(id, params);
  if (!o.cdf) throw std::invalid_argument(id + ": no closed-form CDF for these parameters");
  return o.cdf(x);
}

double oracle_constant(const std::string& id, const Params& params) {
  Oracle o = oracle(id, params);
  if (!o.constant) throw std::invalid_argument(id + ": no constant for these parameters");
  return *o.constant;
}

SamplePool default_init(const std::string& id, const Params& params, std::size_t n, std::uint64_t seed) {
  const auto& e = find_entry(id);
  return e.init(resolve_params(e, params), n, seed);
}

double quicksort_toll(double x) {
  auto xlogx = [](double t) { return t <= 0 ? 0.0 : t * std::log(t); };
  if (x <= 0 || x >= 1) return 1.0;
  return 2 * xlogx(x) + 2 * xlogx(1 - x) + 1;
}

double quicksort_toll_second_moment() {
  static const double v = integrate([](double x) { return quicksort_toll(x) * quicksort_toll(x); }, 0, 1, 1e-10).value;
  return v;
}

double regular_matching_b(int r) {
  if (r < 2) throw std::invalid_argument("regular_matching_b: r >= 2");
  return solve_root([r](double b) { return b - 1 + (1 - std::pow(b, r)) / (r * (1 - b)); }, 1e-12, 1 - 1e-9, 1e-15);
}

double regular_matching_limit(int r) {
  const double b = regular_matching_b(r);
  const double q = 1 - b;
  auto first = integrate([&](double t) { return t * std::exp(-t) * std::pow(1 - std::exp(-t) * q, r - 1); }, 0,
                         kInf, 1e-10);
  auto inner = [&](double t) {
    return integrate(
               [&](double z) {
                 return t * std::exp(-t) * std::exp(-z) * std::pow(1 - std::exp(-z) * q, r - 2) *
                        std::pow(1 - std::exp(-t + z) * q, r - 1);
               },
               0, t, 1e-9)
        .value;
  };
  auto second = integrate(inner, 0, kInf, 1e-7);
  return r * std::pow(b, r - 1) / 2 * first.value + r * (r - 1) * q / 2 * second.value;
}

std::optional<double> noisy_voter_low_root(double eps) {
  auto f = [eps](double q) {
    double m = q * q * q + 3 * q * q * (1 - q);
    return (1 - eps) * m + eps * (1 - m) - q;
  };
  // Below 1/6 the fixed point 1/2 is unstable and a pair of roots splits off.
  if (!(eps < 1.0 / 6.0)) return std::nullopt;
  if (eps == 0) return 0.0;
  double hi = 0.5 - 1e-6;
  if (!(f(hi) < 0)) return std::nullopt;
  return solve_root(f, 0.0, hi, 1e-14);
}

}  // namespace rde
