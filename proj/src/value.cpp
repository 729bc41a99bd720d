#include "rde/value.hpp"

#include <algorithm>
#include <cmath>

namespace rde {

bool StateSpace::contains(const Value& v) const {
  if (v.is_inf()) return allows_inf;
  if (v.dim() != dim) return false;
  switch (kind) {
    case SpaceKind::discrete: {
      double x = v[0];
      return std::any_of(alphabet.begin(), alphabet.end(), [&](int a) { return x == a; });
    }
    case SpaceKind::vector:
      for (int i = 0; i < dim; ++i)
        if (!std::isfinite(v[i])) return false;
      return true;
    case SpaceKind::scalar: {
      double x = v[0];
      if (!std::isfinite(x) || x < lower || x > upper) return false;
      return !integer || x == std::floor(x);
    }
  }
  return false;
}

StateSpace StateSpace::reals(std::string label) {
  StateSpace s;
  s.label = std::move(label);
  return s;
}

StateSpace StateSpace::nonneg(std::string label) {
  StateSpace s;
  s.lower = 0;
  s.label = std::move(label);
  return s;
}

StateSpace StateSpace::nonpos(std::string label) {
  StateSpace s;
  s.upper = 0;
  s.label = std::move(label);
  return s;
}

StateSpace StateSpace::integers_from(int lo, std::string label) {
  StateSpace s;
  s.lower = lo;
  s.integer = true;
  s.label = std::move(label);
  return s;
}

StateSpace StateSpace::binary() {
  StateSpace s;
  s.kind = SpaceKind::discrete;
  s.alphabet = {0, 1};
  s.lower = 0;
  s.upper = 1;
  s.label = "{0,1}";
  return s;
}

StateSpace StateSpace::vectors(int dim, std::string label) {
  StateSpace s;
  s.kind = SpaceKind::vector;
  s.dim = dim;
  s.label = std::move(label);
  return s;
}

StateSpace StateSpace::interval_with_inf(double lo, double hi, std::string label) {
  StateSpace s;
  s.lower = lo;
  s.upper = hi;
  s.allows_inf = true;
  s.label = std::move(label);
  return s;
}

}  // namespace rde
