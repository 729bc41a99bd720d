#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rde/catalog.hpp"
#include "rde/engine.hpp"

namespace rde {

// ---- critical scan ----

struct ScanPoint {
  double param = 0;
  bool converged = false;
  StopReason reason = StopReason::max_iters;
  IterationReport report;
  bool cleaned = false;  // verdict flipped by isotonic cleanup
};

struct ScanConfig {
  int grid_points = 5;
  double resolution = 0.01;   // stop bisection once the bracket is this narrow
  std::size_t n_pool = 100000;
  IterateConfig iter;
  bool diverges_above = true;  // fixed points exist below the critical value
  // max_iters counts as "no fixed point found"
  bool max_iters_is_divergence = true;
};

struct ScanResult {
  std::vector<ScanPoint> points;  // grid then bisection points, in evaluation order
  double estimate = 0;
  double bracket_lo = 0, bracket_hi = 0;
  bool consistent = true;   // raw grid verdicts were already monotone
  int flips = 0;
};

using Family = std::function<RdeSpec(double)>;
using InitFn = std::function<SamplePool(double, std::size_t, std::uint64_t)>;

ScanResult critical_scan(const Family& family, const InitFn& init, double lo, double hi, const ScanConfig& cfg);

// ---- scaling fits ----

enum class ScalingModel { power, exp_inverse_sqrt };

struct ScalingFit {
  double exponent = 0;   // slope in transformed coordinates (power) or rate (exp_inverse_sqrt)
  double intercept = 0;
  double r2 = 0;
};

// power: log y = a + b log x.  exp_inverse_sqrt: log y = a - b x^{-1/2}.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points, ScalingModel model);

// ---- linear moment recursion ----

struct MomentSpec {
  double e_xi0 = 0;
  double e_xi0_sq = 0;
  double sum_e_xi = 0;      // sum_i E xi_i
  double sum_e_xi_sq = 0;   // sum_i E xi_i^2
  double cross_ij = 0;      // sum_{i != j} E xi_i xi_j
  double cross_0i = 0;      // sum_i E xi_0 xi_i
  std::optional<double> mean;  // required when sum_e_xi = 1
};

struct Moments {
  double mean = 0;
  double second_moment = 0;
};

// Throws std::domain_error when a moment equation is not solvable.
Moments moment_recursion(const MomentSpec& ms);

// ---- discount norms ----

struct DiscountNorm {
  double p = 0;
  double closed_form = 0;
  double monte_carlo = 0;
  double mc_stderr = 0;
};

struct DiscountCertificate {
  std::vector<DiscountNorm> grid;
  std::optional<double> certificate_p;  // smallest grid p with c(p) < 1
};

// c(p) = sum_i E xi_i^p for the discounted entries species_extinction,
// find_worstcase, discounted_brw.
DiscountNorm discount_norm(const std::string& id, const Params& params, double p, std::size_t mc_samples = 200000,
                           std::uint64_t seed = 1);
DiscountCertificate discount_certificate(const std::string& id, const Params& params,
                                         const std::vector<double>& p_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                                                                               12, 15, 20},
                                         std::size_t mc_samples = 200000, std::uint64_t seed = 1);

// ---- estimators ----

// Monte Carlo E[(max_{i<children} xi_i + L_i)^+], L drawn from the pool.
double speed_from_L(const SamplePool& L_pool, const std::string& xi_law, std::size_t n = 1000000,
                    std::uint64_t seed = 1, int children = 1);

struct FixedPointCheck {
  double ks_step = 0;      // KS(T(pool), pool)
  double w1_step = 0;      // NaN when the sentinel is present
  double inf_atom_error = 0;
  std::optional<double> ks_oracle;  // KS(T(pool), cdf) when a cdf is given
  bool pass = false;
};

FixedPointCheck verify_fixed_point(const RdeSpec& spec, const std::function<Value(Rng&)>& sampler, std::size_t n,
                                   double tol, std::uint64_t seed = 1,
                                   const std::function<double(double)>& cdf = nullptr);

// E[((X1 + X2)^+)^{d+1}] / (d+1) over n pairs, X1 from a and X2 from b.
struct MeanEstimate {
  double value = 0;
  double stderr_ = 0;
};
MeanEstimate pairing_functional(const SamplePool& a, const SamplePool& b, double d, std::size_t n,
                                std::uint64_t seed = 1);

// (1/2) E sum_{i<=r} xi_i 1(xi_i - X_i = max_j (xi_j - X_j) > 0), xi Exp(1).
MeanEstimate regular_matching_mc(const SamplePool& fixed, int r, std::size_t n, std::uint64_t seed = 1);

// E xi 1(xi > X + Z) with X, Z from their fixed-point pools.
MeanEstimate gw_matching_Z_constant(const SamplePool& x_pool, const SamplePool& z_pool, const std::string& nu_law,
                                    std::size_t n, std::uint64_t seed = 1);

}  // namespace rde
