#include "rde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rde/distance.hpp"
#include "rde/laws.hpp"

namespace rde {

namespace {

ScanPoint run_point(const Family& family, const InitFn& init, double x, std::size_t idx, const ScanConfig& cfg) {
  ScanPoint pt;
  pt.param = x;
  IterateConfig ic = cfg.iter;
  ic.seed = mix_keys({cfg.iter.seed, 0x5ca7, idx});
  RdeSpec spec = family(x);
  auto [pool, rep] = iterate(spec, init(x, cfg.n_pool, ic.seed ^ 0x1417), ic);
  pt.reason = rep.stop_reason;
  pt.converged = rep.stop_reason == StopReason::converged ||
                 (rep.stop_reason == StopReason::max_iters && !cfg.max_iters_is_divergence);
  pt.report = std::move(rep);
  return pt;
}

struct Line {
  double slope = 0, intercept = 0, r2 = 0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("scaling_fit: abscissae have no spread");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  l.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return l;
}

MeanEstimate finish(double sum, double sum2, std::size_t n) {
  MeanEstimate m;
  m.value = sum / double(n);
  double var = std::max(0.0, sum2 / double(n) - m.value * m.value);
  m.stderr_ = std::sqrt(var / double(n));
  return m;
}

}  // namespace

ScanResult critical_scan(const Family& family, const InitFn& init, double lo, double hi, const ScanConfig& cfg) {
  if (!(hi > lo)) throw std::invalid_argument("critical_scan: empty bracket");
  if (cfg.grid_points < 2) throw std::invalid_argument("critical_scan: need at least 2 grid points");
  ScanResult res;
  const int m = cfg.grid_points;
  std::vector<ScanPoint> grid;
  for (int i = 0; i < m; ++i) {
    double x = lo + (hi - lo) * i / (m - 1);
    grid.push_back(run_point(family, init, x, std::size_t(i), cfg));
  }
  // "Good" means the side where fixed points exist.
  auto good_side = [&](int i) { return cfg.diverges_above ? i : m - 1 - i; };
  // Isotonic cleanup: the split that disagrees with the fewest raw verdicts.
  std::vector<bool> v(m);
  for (int i = 0; i < m; ++i) v[good_side(i)] = grid[i].converged;
  int best_k = 0, best_err = m + 1;
  for (int k = 0; k <= m; ++k) {
    int err = 0;
    for (int i = 0; i < m; ++i) err += (i < k) != v[i];
    if (err < best_err) {
      best_err = err;
      best_k = k;
    }
  }
  res.flips = best_err;
  res.consistent = best_err == 0;
  for (int i = 0; i < m; ++i) {
    bool want = good_side(i) < best_k;
    if (grid[i].converged != want) {
      grid[i].converged = want;
      grid[i].cleaned = true;
    }
  }
  res.points = grid;

  // Ordered along the parameter: a = last converged, b = first diverged.
  double a, b;
  if (best_k == 0 || best_k == m) {
    double edge = (best_k == 0) == cfg.diverges_above ? lo : hi;
    res.estimate = res.bracket_lo = res.bracket_hi = edge;
    return res;
  }
  if (cfg.diverges_above) {
    a = grid[best_k - 1].param;
    b = grid[best_k].param;
  } else {
    a = grid[m - best_k].param;
    b = grid[m - best_k - 1].param;
  }
  std::size_t idx = std::size_t(m);
  while (std::abs(b - a) > cfg.resolution) {
    double mid = 0.5 * (a + b);
    ScanPoint pt = run_point(family, init, mid, idx++, cfg);
    (pt.converged ? a : b) = mid;
    res.points.push_back(std::move(pt));
  }
  res.bracket_lo = std::min(a, b);
  res.bracket_hi = std::max(a, b);
  res.estimate = 0.5 * (a + b);
  return res;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points, ScalingModel model) {
  if (points.size() < 4) throw std::invalid_argument("scaling_fit: need at least 4 points");
  std::vector<double> x, y;
  for (auto [g, obs] : points) {
    if (!(g > 0) || !(obs > 0)) throw std::invalid_argument("scaling_fit: inputs must be positive");
    y.push_back(std::log(obs));
    x.push_back(model == ScalingModel::power ? std::log(g) : 1.0 / std::sqrt(g));
  }
  Line l = least_squares(x, y);
  ScalingFit f;
  f.exponent = model == ScalingModel::power ? l.slope : -l.slope;
  f.intercept = l.intercept;
  f.r2 = l.r2;
  return f;
}

Moments moment_recursion(const MomentSpec& ms) {
  Moments out;
  const double denom1 = 1 - ms.sum_e_xi;
  if (std::abs(denom1) < 1e-12) {
    if (!ms.mean) throw std::domain_error("moment_recursion: sum E xi_i = 1, mean must be supplied");
    if (std::abs(ms.e_xi0) > 1e-12) throw std::domain_error("moment_recursion: mean equation has no solution");
    out.mean = *ms.mean;
  } else {
    out.mean = ms.mean ? *ms.mean : ms.e_xi0 / denom1;
  }
  const double denom2 = 1 - ms.sum_e_xi_sq;
  if (!(denom2 > 0)) throw std::domain_error("moment_recursion: sum E xi_i^2 >= 1, second moment not contracted");
  const double m1 = out.mean;
  out.second_moment = (ms.e_xi0_sq + 2 * ms.cross_0i * m1 + ms.cross_ij * m1 * m1) / denom2;
  return out;
}

DiscountNorm discount_norm(const std::string& id, const Params& params, double p, std::size_t mc_samples,
                           std::uint64_t seed) {
  if (!(p > 0)) throw std::invalid_argument("discount_norm: p > 0");
  const auto& entry = find_entry(id);
  Params prm = resolve_params(entry, params);
  DiscountNorm d;
  d.p = p;
  std::function<double(Rng&)> draw;
  if (id == "species_extinction" || id == "species_extinction_hom") {
    d.closed_form = 1.0 / p;
    draw = [p](Rng& r) {
      double x = 0, s = 0;
      for (;;) {
        x += r.exponential();
        double w = std::exp(-p * x);
        s += w;
        if (w < 1e-17 * s) break;
      }
      return s;
    };
  } else if (id == "find_worstcase") {
    d.closed_form = 2.0 / (p + 1);
    draw = [p](Rng& r) {
      double u = r.uniform();
      return std::pow(u, p) + std::pow(1 - u, p);
    };
  } else if (id == "discounted_brw") {
    Law N = parse_law(str(prm, "N"));
    const double c = num(prm, "c");
    d.closed_form = N.mean * std::pow(c, p);
    draw = [N, c, p](Rng& r) { return N.sample(r) * std::pow(c, p); };
  } else {
    throw std::invalid_argument("discount_norm: '" + id + "' is not a discounted tree sum");
  }
  double s = 0, s2 = 0;
  for (std::size_t i = 0; i < mc_samples; ++i) {
    Rng r = Rng::stream({seed, 0xd15c, i});
    double w = draw(r);
    s += w;
    s2 += w * w;
  }
  MeanEstimate m = finish(s, s2, mc_samples);
  d.monte_carlo = m.value;
  d.mc_stderr = m.stderr_;
  return d;
}

DiscountCertificate discount_certificate(const std::string& id, const Params& params, const std::vector<double>& p_grid,
                                         std::size_t mc_samples, std::uint64_t seed) {
  DiscountCertificate c;
  for (double p : p_grid) {
    c.grid.push_back(discount_norm(id, params, p, mc_samples, seed));
    if (!c.certificate_p && c.grid.back().closed_form < 1) c.certificate_p = p;
  }
  return c;
}

double speed_from_L(const SamplePool& L_pool, const std::string& xi_law, std::size_t n, std::uint64_t seed,
                    int children) {
  if (L_pool.size() == 0) throw std::invalid_argument("speed_from_L: empty pool");
  if (children < 1) throw std::invalid_argument("speed_from_L: children must be >= 1");
  Law xi = parse_law(xi_law);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rng r = Rng::stream({seed, 0x5bed, i});
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < children; ++c) best = std::max(best, xi.sample(r) + L_pool[r.index(L_pool.size())][0]);
    s += std::max(0.0, best);
  }
  return s / double(n);
}

FixedPointCheck verify_fixed_point(const RdeSpec& spec, const std::function<Value(Rng&)>& sampler, std::size_t n,
                                   double tol, std::uint64_t seed, const std::function<double(double)>& cdf) {
  FixedPointCheck c;
  SamplePool pool = SamplePool::sample(n, sampler, seed);
  SamplePool out = apply_T(pool, spec, mix_keys({seed, 0xf1}));
  c.ks_step = pool_distance(out, pool, DistanceKind::ks, 1);
  c.inf_atom_error = std::abs(out.stats().frac_inf - pool.stats().frac_inf);
  if (pool.dim() == 1 && c.inf_atom_error == 0 && pool.stats().frac_inf == 0)
    c.w1_step = wasserstein_p(out, pool, 1);
  else
    c.w1_step = std::numeric_limits<double>::quiet_NaN();
  if (cdf) c.ks_oracle = ks_to_cdf(out, cdf);
  c.pass = c.ks_step < tol && c.inf_atom_error < tol;
  return c;
}

MeanEstimate pairing_functional(const SamplePool& a, const SamplePool& b, double d, std::size_t n,
                                std::uint64_t seed) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("pairing_functional: empty pool");
  double s = 0, s2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rng r = Rng::stream({seed, 0xa11, i});
    const Value& x1 = a[r.index(a.size())];
    const Value& x2 = b[r.index(b.size())];
    if (x1.is_inf() || x2.is_inf()) throw std::invalid_argument("pairing_functional: infinite values");
    double t = std::max(0.0, x1[0] + x2[0]);
    double v = std::pow(t, d + 1) / (d + 1);
    s += v;
    s2 += v * v;
  }
  return finish(s, s2, n);
}

MeanEstimate regular_matching_mc(const SamplePool& fixed, int r, std::size_t n, std::uint64_t seed) {
  if (r < 2) throw std::invalid_argument("regular_matching_mc: r >= 2");
  double s = 0, s2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Rng g = Rng::stream({seed, 0x2e6, k});
    double best = -std::numeric_limits<double>::infinity(), best_xi = 0;
    for (int i = 0; i < r; ++i) {
      double xi = g.exponential();
      double v = xi - fixed[g.index(fixed.size())][0];
      if (v > best) {
        best = v;
        best_xi = xi;
      }
    }
    double val = best > 0 ? 0.5 * best_xi : 0.0;
    s += val;
    s2 += val * val;
  }
  return finish(s, s2, n);
}

MeanEstimate gw_matching_Z_constant(const SamplePool& x_pool, const SamplePool& z_pool, const std::string& nu_law,
                                    std::size_t n, std::uint64_t seed) {
  Law nu = parse_law(nu_law);
  double s = 0, s2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Rng g = Rng::stream({seed, 0x27, k});
    double xi = nu.sample(g);
    double x = x_pool[g.index(x_pool.size())][0];
    double z = z_pool[g.index(z_pool.size())][0];
    double v = xi > x + z ? xi : 0.0;
    s += v;
    s2 += v * v;
  }
  return finish(s, s2, n);
}

}  // namespace rde
