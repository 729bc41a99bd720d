#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rde/pool.hpp"
#include "rde/spec.hpp"

namespace rde {

using ParamValue = std::variant<double, std::string>;
using Params = std::map<std::string, ParamValue>;

struct ParamDef {
  std::string name;
  ParamValue dflt;
  double lo = -1e300, hi = 1e300;  // numeric params only
  std::string doc;
};

enum class OracleKind { none, closed_cdf, constant, root_equation, reference_simulation };
const char* to_string(OracleKind k);

struct Oracle {
  OracleKind kind = OracleKind::none;
  // P(X <= x) for finite x; at the sentinel, the mass strictly below infinity.
  std::function<double(const Value&)> cdf;
  double atom_inf = 0;
  std::function<Value(Rng&)> sampler;   // exact or reference draws
  std::optional<double> constant;
  std::string constant_name;
  std::function<double(double)> root_f;  // root_equation payload
  double root_lo = 0, root_hi = 0;
  std::string description;
};

struct CatalogEntry {
  std::string id;
  std::vector<ParamDef> params;
  std::string state;
  std::string anchor;  // the recursion in words
  OracleKind oracle_kind = OracleKind::none;
  std::function<RdeSpec(const Params&)> build;
  std::function<Oracle(const Params&)> oracle;
  // Default starting pool, usually delta_0.
  std::function<SamplePool(const Params&, std::size_t, std::uint64_t)> init;
};

const std::vector<CatalogEntry>& registry();
const CatalogEntry& find_entry(const std::string& id);

// Fills defaults and range-checks; throws std::invalid_argument.
Params resolve_params(const CatalogEntry& e, const Params& given);
double num(const Params& p, const std::string& key);
std::string str(const Params& p, const std::string& key);

RdeSpec build_spec(const std::string& id, const Params& params = {});
Oracle oracle(const std::string& id, const Params& params = {});
double oracle_cdf(const std::string& id, const Params& params, const Value& x);
double oracle_constant(const std::string& id, const Params& params = {});
SamplePool default_init(const std::string& id, const Params& params, std::size_t n, std::uint64_t seed);

// Quicksort toll C(x) with C(0) = C(1) = 1.
double quicksort_toll(double x);
// E[C(U)^2] by quadrature.
double quicksort_toll_second_moment();

// Regular-graph matching: b solving b = 1 - (1 - b^r)/(r (1 - b)), and the
// limit constant by nested quadrature.
double regular_matching_b(int r);
double regular_matching_limit(int r);

// Root of p = (1-eps) q(p) + eps (1 - q(p)) below 1/2, if one exists.
std::optional<double> noisy_voter_low_root(double eps);

}  // namespace rde
