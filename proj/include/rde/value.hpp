#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace rde {

// Extended-real scalar, small fixed-dimension vector, or discrete symbol.
// +inf is a flag, never a float special value, so atom masses stay exact.
class Value {
 public:
  Value() = default;
  Value(double x) : x_{x, 0, 0} {}  // NOLINT: implicit scalar is convenient in maps

  static Value infinity() {
    Value v;
    v.inf_ = true;
    return v;
  }
  static Value vec2(double a, double b) {
    Value v;
    v.x_ = {a, b, 0};
    v.dim_ = 2;
    return v;
  }
  static Value vec3(double a, double b, double c) {
    Value v;
    v.x_ = {a, b, c};
    v.dim_ = 3;
    return v;
  }

  bool is_inf() const { return inf_; }
  int dim() const { return dim_; }
  double operator[](int i) const { return x_[i]; }
  // Scalar view; the sentinel maps to +inf for arithmetic-free summaries.
  double as_double() const { return inf_ ? std::numeric_limits<double>::infinity() : x_[0]; }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.dim_ == b.dim_ && a.x_ == b.x_;
  }

 private:
  std::array<double, 3> x_{0, 0, 0};
  std::uint8_t dim_ = 1;
  bool inf_ = false;
};

// Extended-real order on scalars.
inline bool ext_less(const Value& a, const Value& b) {
  if (a.is_inf()) return false;
  if (b.is_inf()) return true;
  return a[0] < b[0];
}
inline const Value& ext_min(const Value& a, const Value& b) { return ext_less(b, a) ? b : a; }
inline const Value& ext_max(const Value& a, const Value& b) { return ext_less(a, b) ? b : a; }

enum class SpaceKind { scalar, vector, discrete };

struct StateSpace {
  SpaceKind kind = SpaceKind::scalar;
  int dim = 1;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool allows_inf = false;
  bool integer = false;
  std::vector<int> alphabet;  // discrete only
  std::string label;          // human readable, e.g. "R+"

  bool contains(const Value& v) const;

  static StateSpace reals(std::string label = "R");
  static StateSpace nonneg(std::string label = "R+");
  static StateSpace nonpos(std::string label = "(-inf,0]");
  static StateSpace integers_from(int lo, std::string label);
  static StateSpace binary();
  static StateSpace vectors(int dim, std::string label);
  static StateSpace interval_with_inf(double lo, double hi, std::string label);
};

}  // namespace rde
