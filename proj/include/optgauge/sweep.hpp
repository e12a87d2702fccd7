#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optgauge/hamiltonian.hpp"
#include "optgauge/metrics.hpp"
#include "optgauge/spectra.hpp"
#include "optgauge/system.hpp"

namespace optgauge {

/// One gauge axis: a fixed eta or a uniform range with `steps` points.
struct SweepAxis {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 21;
  bool fixed = false;

  static SweepAxis fixed_at(double eta) { return {eta, eta, 1, true}; }
  static SweepAxis range(double lo, double hi, int steps) {
    return {lo, hi, steps, false};
  }

  int size() const { return fixed ? 1 : steps; }
  double value(int i) const;
  std::vector<double> values() const;
};

/// Exact spectrum shared by every point of a sweep. Computed once in the
/// dipole gauge and checked in the Coulomb gauge.
struct ExactReference {
  RealVector eigenvalues;        // lowest k, absolute
  NumericalSettings settings;    // verified settings, reused per point
  ConvergenceReport report;
  GaugeVector reference_gauge;
  GaugeVector check_gauge;
  double check_deviation = 0.0;  // max |E_ref - E_check|, absolute
  bool gauge_verified = false;
};

ExactReference prepare_reference(const CavitySystem& system,
                                 const NumericalSettings& start,
                                 const ConvergenceTargets& targets);

struct SweepPlan {
  CavitySystem system;
  std::vector<SweepAxis> axes;  // one per mode
  BasisKind basis = BasisKind::bare;
  int levels = 2;
  int energies = 7;
  bool compute_fidelity = true;  // needs one exact ground state per point
  bool compute_entropy = true;   // S_full needs it too; S_trunc is always cheap
  double eigen_tol = 1e-10;      // residual tolerance for per-point solves
  int jobs = 1;
  std::size_t max_points = 100'000;

  /// Throws ConfigError on an empty/all-fixed axis set or too many points.
  void validate() const;
  std::size_t point_count() const;
};

struct SweepPoint {
  std::vector<int> index;  // per-axis index
  MetricsReport metrics;
  bool ok = true;
  std::string flag;        // failure description when !ok
  bool from_cache = false;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<int> shape;
  std::vector<SweepPoint> points;  // row-major over axes, axis 0 slowest
  ExactReference exact;
  double delta = 1.0;

  int flagged() const;
};

/// Optional per-point memoization keyed by gauge.
struct SweepCacheHooks {
  std::function<std::optional<MetricsReport>(const GaugeVector&)> lookup;
  std::function<void(const MetricsReport&)> store;
};

/// Evaluates every gauge point on a worker pool of `plan.jobs` threads.
/// Results are written by grid index, so output does not depend on the
/// worker count. Per-point failures are flagged, not thrown.
SweepResult run_sweep(const SweepPlan& plan, const ExactReference& exact,
                      const SweepCacheHooks* cache = nullptr);

/// Metrics for one gauge point (the work unit of run_sweep).
MetricsReport evaluate_point(const SweepPlan& plan, const ExactReference& exact,
                             const GaugeVector& gauge);

enum class OptimalMetric {
  sigma,
  infidelity,
  entropy_gap,
  entropy_truncated,
  entropy_full,
};

const char* to_string(OptimalMetric metric);
double metric_value(const MetricsReport& report, OptimalMetric metric);

/// Grid argmin over unflagged points; values within 1e-10 are ties, broken
/// by the lexicographically smallest eta vector. Throws Error if every point
/// is flagged.
GaugeVector find_optimal(const SweepResult& result, OptimalMetric metric);

}  // namespace optgauge
