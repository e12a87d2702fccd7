#include "optgauge/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "optgauge/photon.hpp"

namespace optgauge {

double SweepAxis::value(int i) const {
  if (i < 0 || i >= size()) throw DimensionError("axis index out of range");
  if (fixed || steps == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v;
  for (int i = 0; i < size(); ++i) v.push_back(value(i));
  return v;
}

ExactReference prepare_reference(const CavitySystem& system,
                                 const NumericalSettings& start,
                                 const ConvergenceTargets& targets) {
  const std::size_t K = system.modes.size();
  ExactReference ref;
  ref.reference_gauge = GaugeVector::dipole(K);
  ref.check_gauge = GaugeVector::coulomb(K);
  ExactSolution sol = converge(system, ref.reference_gauge, start, targets);
  ref.eigenvalues = sol.spectrum.values;
  ref.report = sol.report;
  ref.settings = sol.report.verified_settings;
  const EigenResult check = solve_exact(system, ref.check_gauge,
                                        sol.report.final_settings, targets.k,
                                        targets.tol, false);
  ref.check_deviation = (check.values - ref.eigenvalues).cwiseAbs().maxCoeff();
  ref.gauge_verified = ref.check_deviation <= 3.0 * targets.tol;
  return ref;
}

void SweepPlan::validate() const {
  if (axes.size() != system.modes.size()) {
    throw ConfigError("/sweep/axes", "need one axis per mode");
  }
  bool any_range = false;
  for (const auto& a : axes) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw ConfigError("/sweep/axes", "axis bounds must be finite");
    }
    if (!a.fixed) {
      if (a.steps < 1) throw ConfigError("/sweep/axes", "steps must be >= 1");
      any_range = true;
    }
  }
  if (!any_range) throw ConfigError("/sweep/axes", "every axis is fixed");
  if (levels < 2) throw ConfigError("/truncation/levels", "must be >= 2");
  if (energies < 1) throw ConfigError("/truncation/energies", "must be >= 1");
  if (point_count() > max_points) {
    throw ConfigError("/sweep/axes", "too many points (" +
                                         std::to_string(point_count()) + ")");
  }
}

std::size_t SweepPlan::point_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.size());
  return n;
}

int SweepResult::flagged() const {
  return static_cast<int>(
      std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return !p.ok; }));
}

MetricsReport evaluate_point(const SweepPlan& plan, const ExactReference& exact,
                             const GaugeVector& gauge) {
  const CavitySystem& sys = plan.system;
  MetricsReport m;
  m.gauge = gauge;
  m.energies = plan.energies;
  m.fidelity = std::numeric_limits<double>::quiet_NaN();
  m.entropy_full = std::numeric_limits<double>::quiet_NaN();

  const TruncatedModel model = build_truncated_model(
      plan.basis, plan.levels, sys.modes, gauge, exact.settings.grid, sys.potential);
  const FockSpace fock(exact.settings.cutoffs);
  const KroneckerSum trunc = assemble_truncated(model, fock);

  EigenRequest req;
  req.k = plan.energies + 1;
  req.tol = plan.eigen_tol;
  const EigenResult ts = lowest_eigenpairs(trunc, req);

  m.sigma = spectral_deviation(excitation_energies(exact.eigenvalues, plan.energies),
                               excitation_energies(ts.values, plan.energies)) /
            sys.delta;
  const ComplexVector trunc_ground = ts.vectors.col(0);
  m.entropy_truncated =
      entanglement_entropy(trunc_ground, plan.levels, fock.dimension());

  if (plan.compute_fidelity || plan.compute_entropy) {
    NumericalSettings settings = exact.settings;
    settings.grid = model.basis.grid;
    const EigenResult full =
        solve_exact(sys, gauge, settings, 1, plan.eigen_tol * 100.0, true);
    const ComplexVector full_ground = full.vectors.col(0);
    if (plan.compute_fidelity) {
      const ComplexVector embedded = embed_truncated_state(
          trunc_ground, model.basis, plan.levels, fock.dimension());
      m.fidelity = ground_state_fidelity(embedded.normalized(), full_ground);
    }
    if (plan.compute_entropy) {
      m.entropy_full =
          entanglement_entropy(full_ground, settings.grid.n_points, fock.dimension());
    }
  }
  return m;
}

SweepResult run_sweep(const SweepPlan& plan, const ExactReference& exact,
                      const SweepCacheHooks* cache) {
  plan.validate();
  SweepResult result;
  result.axes = plan.axes;
  result.exact = exact;
  result.delta = plan.system.delta;
  for (const auto& a : plan.axes) result.shape.push_back(a.size());

  const std::size_t total = plan.point_count();
  result.points.resize(total);
  const int naxes = static_cast<int>(plan.axes.size());

  auto point_index = [&](std::size_t flat) {
    std::vector<int> idx(naxes);
    for (int a = naxes - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % result.shape[a]);
      flat /= result.shape[a];
    }
    return idx;
  };

  std::mutex cache_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < total; i = next++) {
      SweepPoint& pt = result.points[i];
      pt.index = point_index(i);
      std::vector<double> eta(naxes);
      for (int a = 0; a < naxes; ++a) eta[a] = plan.axes[a].value(pt.index[a]);
      const GaugeVector gauge(eta);
      pt.metrics.gauge = gauge;
      try {
        if (cache && cache->lookup) {
          std::optional<MetricsReport> hit;
          {
            std::lock_guard lock(cache_mutex);
            hit = cache->lookup(gauge);
          }
          if (hit) {
            pt.metrics = *hit;
            pt.from_cache = true;
            continue;
          }
        }
        pt.metrics = evaluate_point(plan, exact, gauge);
        if (cache && cache->store) {
          std::lock_guard lock(cache_mutex);
          cache->store(pt.metrics);
        }
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.flag = e.what();
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(plan.jobs, static_cast<int>(total)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return result;
}

const char* to_string(OptimalMetric metric) {
  switch (metric) {
    case OptimalMetric::sigma: return "sigma";
    case OptimalMetric::infidelity: return "infidelity";
    case OptimalMetric::entropy_gap: return "entropy_gap";
    case OptimalMetric::entropy_truncated: return "entropy_truncated";
    case OptimalMetric::entropy_full: return "entropy_full";
  }
  return "?";
}

double metric_value(const MetricsReport& r, OptimalMetric metric) {
  switch (metric) {
    case OptimalMetric::sigma: return r.sigma;
    case OptimalMetric::infidelity: return r.infidelity();
    case OptimalMetric::entropy_gap: return r.entropy_gap();
    case OptimalMetric::entropy_truncated: return r.entropy_truncated;
    case OptimalMetric::entropy_full: return r.entropy_full;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

GaugeVector find_optimal(const SweepResult& result, OptimalMetric metric) {
  constexpr double kTie = 1e-10;
  const SweepPoint* best = nullptr;
  double best_value = 0.0;
  for (const auto& pt : result.points) {
    if (!pt.ok) continue;
    const double v = metric_value(pt.metrics, metric);
    if (std::isnan(v)) continue;
    if (!best || v < best_value - kTie ||
        (std::abs(v - best_value) <= kTie &&
         pt.metrics.gauge.values() < best->metrics.gauge.values())) {
      if (!best || v < best_value) best_value = v;
      best = &pt;
    }
  }
  if (!best) {
    throw Error(std::string("no valid sweep point for metric ") + to_string(metric));
  }
  return best->metrics.gauge;
}

}  // namespace optgauge
