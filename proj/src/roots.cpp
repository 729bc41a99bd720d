#include "rde/roots.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rde {

double solve_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::domain_error("solve_root: empty bracket");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (!(flo * fhi < 0)) throw std::domain_error("solve_root: no sign change on bracket");
  std::uintmax_t iters = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  double x = 0.5 * (r.first + r.second);
  return x;
}

Quad integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  Quad q;
  q.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol, &q.error);
  return q;
}

std::pair<double, double> minimize(const std::function<double(double)>& f, double lo, double hi) {
  auto r = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits / 2);
  return {r.first, r.second};
}

}  // namespace rde
