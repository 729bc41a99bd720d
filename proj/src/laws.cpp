#include "rde/laws.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double arg(const std::vector<std::string>& parts, std::size_t i, double dflt) {
  if (parts.size() <= i || parts[i].empty()) return dflt;
  std::size_t used = 0;
  double v = std::stod(parts[i], &used);
  if (used != parts[i].size()) throw std::invalid_argument("bad number '" + parts[i] + "'");
  return v;
}

}  // namespace

Law parse_law(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.empty()) throw std::invalid_argument("empty law");
  const std::string& kind = parts[0];
  Law L;
  L.text = text;
  try {
    if (kind == "exp") {
      double rate = arg(parts, 1, 1.0);
      if (!(rate > 0)) throw std::invalid_argument("rate must be positive");
      L.sample = [rate](Rng& r) { return r.exponential(rate); };
      L.mean = 1 / rate;
      L.variance = 1 / (rate * rate);
      L.lo = 0;
      L.hi = kInf;
      L.log_mgf = [rate](double t) { return t < rate ? std::log(rate / (rate - t)) : kInf; };
    } else if (kind == "const") {
      double v = arg(parts, 1, 0.0);
      L.sample = [v](Rng&) { return v; };
      L.mean = v;
      L.lo = L.hi = v;
      L.integer = v == std::floor(v) && v >= 0;
      if (L.integer) L.pgf = [v](double s) { return std::pow(s, v); };
      L.log_mgf = [v](double t) { return t * v; };
    } else if (kind == "bernoulli") {
      double p = arg(parts, 1, 0.5);
      if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
      L.sample = [p](Rng& r) { return r.uniform() < p ? 1.0 : 0.0; };
      L.mean = p;
      L.variance = p * (1 - p);
      L.lo = 0;
      L.hi = 1;
      L.integer = true;
      L.pgf = [p](double s) { return 1 - p + p * s; };
      L.log_mgf = [p](double t) { return std::log(1 - p + p * std::exp(t)); };
    } else if (kind == "binomial") {
      int n = int(arg(parts, 1, 2));
      double p = arg(parts, 2, 0.5);
      if (n < 0 || p < 0 || p > 1) throw std::invalid_argument("bad binomial parameters");
      L.sample = [n, p](Rng& r) {
        int k = 0;
        for (int i = 0; i < n; ++i) k += r.uniform() < p;
        return double(k);
      };
      L.mean = n * p;
      L.variance = n * p * (1 - p);
      L.lo = 0;
      L.hi = n;
      L.integer = true;
      L.pgf = [n, p](double s) { return std::pow(1 - p + p * s, n); };
      L.log_mgf = [n, p](double t) { return n * std::log(1 - p + p * std::exp(t)); };
    } else if (kind == "poisson") {
      double m = arg(parts, 1, 1.0);
      if (m < 0) throw std::invalid_argument("negative mean");
      L.sample = [m](Rng& r) { return double(r.poisson(m)); };
      L.mean = m;
      L.variance = m;
      L.lo = 0;
      L.hi = kInf;
      L.integer = true;
      L.pgf = [m](double s) { return std::exp(m * (s - 1)); };
      L.log_mgf = [m](double t) { return m * (std::exp(t) - 1); };
    } else if (kind == "uniform") {
      double a = arg(parts, 1, 0.0), b = arg(parts, 2, 1.0);
      if (!(b > a)) throw std::invalid_argument("empty interval");
      L.sample = [a, b](Rng& r) { return a + (b - a) * r.uniform(); };
      L.mean = (a + b) / 2;
      L.variance = (b - a) * (b - a) / 12;
      L.lo = a;
      L.hi = b;
      L.log_mgf = [a, b](double t) {
        if (t == 0) return 0.0;
        return std::log((std::exp(t * b) - std::exp(t * a)) / (t * (b - a)));
      };
    } else if (kind == "normal") {
      double mu = arg(parts, 1, 0.0), sd = arg(parts, 2, 1.0);
      if (!(sd > 0)) throw std::invalid_argument("sd must be positive");
      L.sample = [mu, sd](Rng& r) { return mu + sd * r.normal(); };
      L.mean = mu;
      L.variance = sd * sd;
      L.lo = -kInf;
      L.hi = kInf;
      L.log_mgf = [mu, sd](double t) { return mu * t + 0.5 * sd * sd * t * t; };
    } else if (kind == "pm1") {
      double p = arg(parts, 1, 0.5);
      if (p < 0 || p > 1) throw std::invalid_argument("p outside [0,1]");
      L.sample = [p](Rng& r) { return r.uniform() < p ? 1.0 : -1.0; };
      L.mean = 2 * p - 1;
      L.variance = 1 - L.mean * L.mean;
      L.lo = p < 1 ? -1 : 1;
      L.hi = p > 0 ? 1 : -1;
      L.log_mgf = [p](double t) { return std::log(p * std::exp(t) + (1 - p) * std::exp(-t)); };
    } else {
      throw std::invalid_argument("unknown law kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("law '" + text + "': " + e.what());
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("law '" + text + "': number out of range");
  }
  return L;
}

}  // namespace rde
