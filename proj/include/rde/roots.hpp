#pragma once

#include <functional>
#include <utility>

namespace rde {

// Bracketed root of f on (lo, hi); throws std::domain_error without a sign change.
double solve_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

// Adaptive Gauss-Kronrod quadrature on [a, b] (b may be +inf).
struct Quad {
  double value = 0;
  double error = 0;
};
Quad integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-6);

// Minimum of f on [lo, hi] by Brent's method; returns (argmin, min).
std::pair<double, double> minimize(const std::function<double(double)>& f, double lo, double hi);

}  // namespace rde
