#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rde/analysis.hpp"
#include "rde/brw.hpp"
#include "rde/catalog.hpp"
#include "rde/cli.hpp"
#include "rde/distance.hpp"
#include "rde/engine.hpp"
#include "rde/frozen.hpp"
#include "rde/io.hpp"
#include "rde/tree.hpp"

namespace py = pybind11;
using namespace rde;

namespace {

// Pools cross the boundary as float arrays: shape (n,) for scalars, (n, dim)
// otherwise; the sentinel becomes +inf in every column.
py::array_t<double> to_numpy(const SamplePool& p) {
  const std::size_t n = p.size();
  const int d = p.dim();
  py::array_t<double> a = d == 1 ? py::array_t<double>(n) : py::array_t<double>({n, std::size_t(d)});
  double* out = a.mutable_data();
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) out[i * d + c] = p[i].is_inf() ? HUGE_VAL : p[i][c];
  return a;
}

SamplePool from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 1 && a.ndim() != 2) throw std::invalid_argument("pool must be 1-d or 2-d");
  const std::size_t n = a.shape(0);
  const int d = a.ndim() == 1 ? 1 : int(a.shape(1));
  if (d < 1 || d > 3) throw std::invalid_argument("pool dimension must be 1, 2 or 3");
  const double* x = a.data();
  std::vector<Value> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = x + i * d;
    if (std::isinf(r[0]) && r[0] > 0)
      v.push_back(Value::infinity());
    else if (d == 1)
      v.emplace_back(r[0]);
    else if (d == 2)
      v.push_back(Value::vec2(r[0], r[1]));
    else
      v.push_back(Value::vec3(r[0], r[1], r[2]));
  }
  return SamplePool(std::move(v));
}

Params to_params(const py::dict& d) {
  Params p;
  for (auto [k, v] : d) {
    auto key = py::cast<std::string>(k);
    if (py::isinstance<py::str>(v))
      p[key] = py::cast<std::string>(v);
    else
      p[key] = py::cast<double>(v);
  }
  return p;
}

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
  return json::parse(py::cast<std::string>(py::module_::import("json").attr("dumps")(o)));
}

}  // namespace

PYBIND11_MODULE(_rdelab, m) {
  m.doc() = "Population dynamics for recursive distributional equations";

  m.def("entries", [] {
    py::list out;
    for (const auto& e : registry()) {
      py::dict d;
      d["id"] = e.id;
      d["state"] = e.state;
      d["anchor"] = e.anchor;
      d["oracle"] = to_string(e.oracle_kind);
      py::dict prm;
      for (const auto& p : e.params) {
        if (std::holds_alternative<double>(p.dflt))
          prm[p.name.c_str()] = std::get<double>(p.dflt);
        else
          prm[p.name.c_str()] = std::get<std::string>(p.dflt);
      }
      d["params"] = prm;
      out.append(d);
    }
    return out;
  });

  m.def(
      "iterate",
      [](const std::string& id, py::dict params, std::size_t pool, int iters, double tol, std::uint64_t seed,
         py::object init) {
        Params prm = to_params(params);
        RdeSpec spec = build_spec(id, prm);
        IterateConfig ic;
        ic.max_iters = iters;
        ic.tol = tol;
        ic.seed = seed;
        SamplePool start = init.is_none() ? default_init(id, prm, pool, mix_keys({seed, 0x1417}))
                                          : from_numpy(init.cast<py::array_t<double>>());
        std::pair<SamplePool, IterationReport> res;
        {
          py::gil_scoped_release nogil;
          res = iterate(spec, std::move(start), ic);
        }
        py::dict d;
        d["pool"] = to_numpy(res.first);
        d["stop_reason"] = to_string(res.second.stop_reason);
        d["generations"] = res.second.records.size();
        d["detail"] = res.second.detail;
        d["report"] = to_py(report_json_lines(res.second));
        return d;
      },
      py::arg("entry"), py::arg("params") = py::dict(), py::arg("pool") = 100000, py::arg("iters") = 200,
      py::arg("tol") = 0.01, py::arg("seed") = 1, py::arg("init") = py::none());

  m.def(
      "apply_T",
      [](const std::string& id, py::array_t<double> pool, py::dict params, std::uint64_t seed) {
        return to_numpy(apply_T(from_numpy(pool), build_spec(id, to_params(params)), seed));
      },
      py::arg("entry"), py::arg("pool"), py::arg("params") = py::dict(), py::arg("seed") = 1);

  m.def(
      "endogeny",
      [](const std::string& id, py::array_t<double> fixed, py::dict params, int iters, int min_iters,
         std::uint64_t seed) {
        EndogenyConfig ec;
        ec.max_iters = iters;
        ec.min_iters = min_iters;
        ec.seed = seed;
        RdeSpec spec = build_spec(id, to_params(params));
        SamplePool fp = from_numpy(fixed);
        EndogenyReport r;
        {
          py::gil_scoped_release nogil;
          r = endogeny_iterate(spec, fp, ec);
        }
        py::dict d;
        d["verdict"] = to_string(r.verdict);
        std::vector<double> gaps;
        for (const auto& g : r.gaps) gaps.push_back(g.normalized);
        d["normalized_gaps"] = gaps;
        return d;
      },
      py::arg("entry"), py::arg("fixed"), py::arg("params") = py::dict(), py::arg("iters") = 150,
      py::arg("min_iters") = 50, py::arg("seed") = 1);

  m.def(
      "oracle_cdf",
      [](const std::string& id, double x, py::dict params) {
        return oracle_cdf(id, to_params(params), std::isinf(x) && x > 0 ? Value::infinity() : Value(x));
      },
      py::arg("entry"), py::arg("x"), py::arg("params") = py::dict());
  m.def(
      "oracle_sample",
      [](const std::string& id, std::size_t n, py::dict params, std::uint64_t seed) {
        Oracle o = oracle(id, to_params(params));
        if (!o.sampler) throw std::invalid_argument(id + " has no oracle sampler");
        return to_numpy(SamplePool::sample(n, o.sampler, seed));
      },
      py::arg("entry"), py::arg("n"), py::arg("params") = py::dict(), py::arg("seed") = 1);
  m.def("oracle_constant", [](const std::string& id, py::dict params) { return oracle_constant(id, to_params(params)); },
        py::arg("entry"), py::arg("params") = py::dict());

  m.def(
      "ks",
      [](py::array_t<double> a, py::array_t<double> b) {
        return pool_distance(from_numpy(a), from_numpy(b), DistanceKind::ks, 1);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "wasserstein",
      [](py::array_t<double> a, py::array_t<double> b, double p) {
        return wasserstein_p(from_numpy(a), from_numpy(b), p);
      },
      py::arg("a"), py::arg("b"), py::arg("p") = 1.0);

  m.def(
      "exact_sample",
      [](const std::string& id, std::size_t n, py::dict params, std::uint64_t seed) {
        ExactPool ep = exact_sample_pool(build_spec(id, to_params(params)), n, seed);
        return py::make_tuple(to_numpy(ep.pool), ep.discarded);
      },
      py::arg("entry"), py::arg("n"), py::arg("params") = py::dict(), py::arg("seed") = 1);

  m.def(
      "critical_scan",
      [](const std::string& id, const std::string& key, double lo, double hi, py::dict params, std::size_t pool,
         int iters, double resolution, int grid, std::uint64_t seed) {
        const auto& e = find_entry(id);
        Params base = to_params(params);
        auto at = [&](double x) {
          Params p = base;
          p[key] = x;
          return resolve_params(e, p);
        };
        ScanConfig sc;
        sc.grid_points = grid;
        sc.resolution = resolution;
        sc.n_pool = pool;
        sc.iter.max_iters = iters;
        sc.iter.tol = 1e-12;
        sc.iter.seed = seed;
        sc.max_iters_is_divergence = false;
        ScanResult r;
        {
          py::gil_scoped_release nogil;
          r = critical_scan([&](double x) { return build_spec(id, at(x)); },
                            [&](double x, std::size_t n, std::uint64_t s) { return default_init(id, at(x), n, s); },
                            lo, hi, sc);
        }
        return to_py(scan_json(r));
      },
      py::arg("entry"), py::arg("param"), py::arg("lo"), py::arg("hi"), py::arg("params") = py::dict(),
      py::arg("pool") = 100000, py::arg("iters") = 200, py::arg("resolution") = 0.01, py::arg("grid") = 5,
      py::arg("seed") = 1);

  m.def(
      "scaling_fit",
      [](const std::vector<std::pair<double, double>>& pts, const std::string& model) {
        if (model != "power" && model != "exp_inverse_sqrt")
          throw std::invalid_argument("model must be power or exp_inverse_sqrt");
        ScalingFit f = scaling_fit(pts, model == "power" ? ScalingModel::power : ScalingModel::exp_inverse_sqrt);
        py::dict d;
        d["exponent"] = f.exponent;
        d["intercept"] = f.intercept;
        d["r2"] = f.r2;
        return d;
      },
      py::arg("points"), py::arg("model") = "power");

  m.def(
      "speed_from_L",
      [](py::array_t<double> L, const std::string& xi, std::size_t n, std::uint64_t seed, int children) {
        return speed_from_L(from_numpy(L), xi, n, seed, children);
      },
      py::arg("L_pool"), py::arg("xi"), py::arg("n") = 1000000, py::arg("seed") = 1, py::arg("children") = 1);

  m.def(
      "greedy_brw_speed",
      [](const std::string& xi, std::size_t steps, std::uint64_t seed) {
        return greedy_brw(make_brw("const:2", xi), steps, seed).speed;
      },
      py::arg("xi"), py::arg("steps") = 1 << 20, py::arg("seed") = 1);

  m.def(
      "frozen_local_stats",
      [](py::array_t<double> pool, std::size_t n, std::uint64_t seed) {
        FrozenStats s = frozen_perc_local_stats(from_numpy(pool), n, seed);
        py::dict d;
        d["edges"] = py::make_tuple(s.p_edge_inf, s.p_edge_fin, s.p_edge_out);
        d["vertices"] = py::make_tuple(s.p_vertex_inf, s.p_vertex_fin, s.p_vertex_out);
        return d;
      },
      py::arg("pool"), py::arg("n") = 1000000, py::arg("seed") = 1);

  m.def(
      "run",
      [](py::dict config) {
        RunConfig c = config_from_json(from_py(config));
        std::ostringstream log, err;
        int code = run_command(c, log, err);
        return py::make_tuple(code, log.str() + err.str());
      },
      py::arg("config"));
}
