#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "optgauge/runner.hpp"

namespace py = pybind11;
using namespace optgauge;

namespace bindings {

namespace {

// Configs cross the boundary as JSON text; the Python side serializes dicts.
RunConfig config_from(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("/", e.what());
  }
  return parse_config(doc);
}

struct Session {
  std::optional<ResultCache> cache;
  RunContext ctx;

  Session(bool use_cache, int jobs, const std::string& cache_dir) {
    if (use_cache) {
      cache.emplace(cache_dir.empty() ? ResultCache::default_directory()
                                      : std::filesystem::path(cache_dir));
      ctx.cache = &*cache;
    }
    ctx.jobs = std::max(jobs, 1);
  }
};

py::dict exact(const std::string& config, std::optional<std::vector<double>> gauge,
               bool use_cache, const std::string& cache_dir) {
  const RunConfig c = config_from(config);
  const GaugeVector eta = gauge ? GaugeVector(*gauge) : c.gauge;
  Session s(use_cache, 1, cache_dir);
  CavitySystem sys;
  ExactSolution sol;
  {
    py::gil_scoped_release release;
    sys = make_system(c);
    sol = obtain_exact(c, sys, eta, s.ctx);
  }
  py::dict out;
  out["eigenvalues"] = RealVector(sol.spectrum.values);
  out["excitations"] = RealVector((sol.spectrum.values.array() - sol.spectrum.values(0)) /
                                  sys.delta);
  out["delta"] = sys.delta;
  out["converged"] = sol.report.converged;
  out["summary"] = sol.report.summary(sys.delta);
  out["config_hash"] = config_hash(c);
  return out;
}

py::dict sweep(const std::string& config, int jobs, bool use_cache,
               const std::string& cache_dir) {
  const RunConfig c = config_from(config);
  Session s(use_cache, jobs, cache_dir);
  SweepResult r;
  {
    py::gil_scoped_release release;
    r = obtain_sweep(c, make_system(c), s.ctx);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(r.points.size());
  const Eigen::Index K = static_cast<Eigen::Index>(r.axes.size());
  RealMatrix eta(n, K);
  RealVector sigma(n), fidelity(n), s_full(n), s_trunc(n);
  std::vector<bool> ok;
  std::vector<std::string> flags;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = r.points[i];
    for (Eigen::Index k = 0; k < K; ++k) eta(i, k) = p.metrics.gauge[k];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sigma(i) = p.ok ? p.metrics.sigma : nan;
    fidelity(i) = p.ok ? p.metrics.fidelity : nan;
    s_full(i) = p.ok ? p.metrics.entropy_full : nan;
    s_trunc(i) = p.ok ? p.metrics.entropy_truncated : nan;
    ok.push_back(p.ok);
    flags.push_back(p.flag);
  }
  py::dict argmin;
  for (auto m : c.metrics) {
    try {
      argmin[to_string(m)] = find_optimal(r, m).values();
    } catch (const Error&) {
      argmin[to_string(m)] = py::none();
    }
  }
  py::dict out;
  out["eta"] = eta;
  out["shape"] = r.shape;
  out["sigma"] = sigma;
  out["fidelity"] = fidelity;
  out["entropy_full"] = s_full;
  out["entropy_truncated"] = s_trunc;
  out["ok"] = ok;
  out["flags"] = flags;
  out["argmin"] = argmin;
  out["delta"] = r.delta;
  out["gauge_verified"] = r.exact.gauge_verified;
  out["exact_summary"] = r.exact.report.summary(r.delta);
  out["config_hash"] = config_hash(c);
  return out;
}

std::vector<std::filesystem::path> reproduce(const std::string& figure,
                                             const std::filesystem::path& out_dir, int jobs,
                                             std::optional<double> tol, bool use_cache,
                                             const std::string& cache_dir) {
  Session s(use_cache, jobs, cache_dir);
  py::gil_scoped_release release;
  return reproduce_figure(figure, out_dir, s.ctx, tol);
}

}  // namespace

void init_runs(py::module_& m) {
  m.def(
      "canonical_config",
      [](const std::string& text) { return to_json(config_from(text)).dump(); },
      py::arg("config_json"), "Validated config with every default filled in, as JSON.");
  m.def(
      "config_hash", [](const std::string& text) { return config_hash(config_from(text)); },
      py::arg("config_json"));
  m.def("exact", &exact, py::arg("config_json"), py::arg("gauge") = py::none(),
        py::arg("cache") = true, py::arg("cache_dir") = "");
  m.def("sweep", &sweep, py::arg("config_json"), py::arg("jobs") = 1,
        py::arg("cache") = true, py::arg("cache_dir") = "");
  m.def("reproduce", &reproduce, py::arg("figure"), py::arg("out_dir"), py::arg("jobs") = 1,
        py::arg("tol") = py::none(), py::arg("cache") = true, py::arg("cache_dir") = "");
  m.def("figure_names", &figure_names);
}

}  // namespace bindings
