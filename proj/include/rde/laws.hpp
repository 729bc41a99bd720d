#pragma once

#include <functional>
#include <string>

#include "rde/rng.hpp"

namespace rde {

// A one-dimensional law parsed from a short text form such as "exp:1",
// "poisson:1", "bernoulli:0.5", "const:2", "uniform:0:1", "normal:0:1", "pm1:0.3".
struct Law {
  std::string text;
  std::function<double(Rng&)> sample;
  double mean = 0;
  double variance = 0;
  double lo = 0, hi = 0;   // support hull; may be infinite
  bool integer = false;
  std::function<double(double)> pgf;      // integer laws on {0,1,...}
  std::function<double(double)> log_mgf;  // log E exp(t X), may be +inf
};

Law parse_law(const std::string& text);

}  // namespace rde
