#include <doctest.h>

#include <cmath>

#include "optgauge/sweep.hpp"

using namespace optgauge;

namespace {

const PotentialSpec kWell = PotentialSpec::double_well_from_gamma(64.0);

struct Fixture {
  CavitySystem system;
  ExactReference exact;
};

Fixture single_mode(double g, int cutoff) {
  Fixture f;
  f.system = resolve_system(kWell, std::vector<double>{1.0}, g, default_grid(kWell));
  NumericalSettings start = default_settings(f.system);
  start.cutoffs = {cutoff};
  ConvergenceTargets t;
  t.k = 8;
  t.tol = 1e-6 * f.system.delta;
  f.exact = prepare_reference(f.system, start, t);
  return f;
}

SweepPlan plan_for(const Fixture& f, int steps, bool fidelity, bool entropy) {
  SweepPlan p;
  p.system = f.system;
  p.axes = {SweepAxis::range(0.0, 1.0, steps)};
  p.compute_fidelity = fidelity;
  p.compute_entropy = entropy;
  return p;
}

SweepResult synthetic(std::vector<double> sigma) {
  SweepResult r;
  const int n = static_cast<int>(sigma.size());
  r.axes = {SweepAxis::range(0.0, 1.0, n)};
  r.shape = {n};
  for (int i = 0; i < n; ++i) {
    SweepPoint p;
    p.index = {i};
    p.metrics.gauge = GaugeVector{r.axes[0].value(i)};
    p.metrics.sigma = sigma[i];
    r.points.push_back(p);
  }
  return r;
}

}  // namespace

TEST_CASE("sweep axes") {
  const SweepAxis a = SweepAxis::range(0.0, 1.0, 21);
  CHECK(a.value(0) == 0.0);
  CHECK(a.value(20) == 1.0);
  CHECK(a.value(7) == doctest::Approx(0.35));
  CHECK(SweepAxis::fixed_at(0.4).values() == std::vector<double>{0.4});
}

TEST_CASE("plan validation") {
  SweepPlan p;
  p.system.modes = {ModeSpec{1.0, 0.1}};
  p.axes = {SweepAxis::fixed_at(0.5)};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.axes = {SweepAxis::range(0, 1, 5), SweepAxis::range(0, 1, 5)};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.axes = {SweepAxis::range(0, 1, 5)};
  p.max_points = 3;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.max_points = 5;
  CHECK_NOTHROW(p.validate());
  CHECK(p.point_count() == 5);
}

TEST_CASE("argmin ties go to the smaller gauge") {
  SweepResult r = synthetic({0.3, 0.1, 0.2, 0.1 + 1e-12, 0.5});
  CHECK(find_optimal(r, OptimalMetric::sigma)[0] == doctest::Approx(0.25));
  r.points[1].ok = false;
  CHECK(find_optimal(r, OptimalMetric::sigma)[0] == doctest::Approx(0.75));
  r.points[0].metrics.sigma = NAN;
  CHECK(find_optimal(r, OptimalMetric::sigma)[0] == doctest::Approx(0.75));
  for (auto& p : r.points) p.ok = false;
  CHECK_THROWS_AS(find_optimal(r, OptimalMetric::sigma), Error);
}

TEST_CASE("metric accessors") {
  MetricsReport m;
  m.sigma = 0.2;
  m.fidelity = 0.9;
  m.entropy_full = 0.3;
  m.entropy_truncated = 0.1;
  CHECK(metric_value(m, OptimalMetric::sigma) == 0.2);
  CHECK(metric_value(m, OptimalMetric::infidelity) == doctest::Approx(0.1));
  CHECK(metric_value(m, OptimalMetric::entropy_gap) == doctest::Approx(0.2));
  CHECK(std::string(to_string(OptimalMetric::entropy_truncated)) == "entropy_truncated");
}

TEST_CASE("reference is checked in the Coulomb gauge") {
  const Fixture f = single_mode(0.8, 14);
  CHECK(f.exact.report.converged);
  CHECK(f.exact.gauge_verified);
  CHECK(f.exact.check_deviation < 3e-6 * f.system.delta);
  CHECK(f.exact.settings == f.exact.report.verified_settings);
}

TEST_CASE("sweep results do not depend on the worker count") {
  const Fixture f = single_mode(0.8, 14);
  SweepPlan p = plan_for(f, 6, true, true);
  p.jobs = 1;
  const SweepResult a = run_sweep(p, f.exact);
  p.jobs = 3;
  const SweepResult b = run_sweep(p, f.exact);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].metrics.sigma == b.points[i].metrics.sigma);
    CHECK(a.points[i].metrics.fidelity == b.points[i].metrics.fidelity);
    CHECK(a.points[i].metrics.entropy_full == b.points[i].metrics.entropy_full);
  }
  CHECK(a.flagged() == 0);
  // The exact entropy is a property of the physical state: at most weakly
  // gauge dependent here, and never negative.
  for (const auto& pt : a.points) CHECK(pt.metrics.entropy_full >= 0.0);
}

TEST_CASE("cache hooks short-circuit evaluation") {
  const Fixture f = single_mode(0.4, 14);
  SweepPlan p = plan_for(f, 3, false, false);
  int stored = 0;
  SweepCacheHooks hooks;
  hooks.lookup = [](const GaugeVector& g) -> std::optional<MetricsReport> {
    if (g[0] != 0.5) return std::nullopt;
    MetricsReport m;
    m.gauge = g;
    m.sigma = 42.0;
    return m;
  };
  hooks.store = [&](const MetricsReport&) { ++stored; };
  const SweepResult r = run_sweep(p, f.exact, &hooks);
  CHECK(r.points[1].from_cache);
  CHECK(r.points[1].metrics.sigma == 42.0);
  CHECK(stored == 2);
  CHECK(std::isnan(r.points[0].metrics.fidelity));
}

TEST_CASE("two-level model decouples where its counter-rotating terms cancel") {
  // For the bare two-level model with one mode, sigma_y and sigma_x couple to
  // squeezed quadratures of the dressed photon (frequency w~). The
  // counter-rotating parts cancel when (1 - eta) Delta = eta w~(eta), with
  // w~^2 = w^2 + 2 w (1 - eta)^2 A^2; the ground state is then a product.
  const Fixture f = single_mode(1.2, 20);
  const double D = f.system.delta, w = f.system.modes[0].omega;
  const double A = f.system.modes[0].amplitude;
  auto mismatch = [&](double eta) {
    const double wt = std::sqrt(w * w + 2.0 * w * std::pow((1 - eta) * A, 2));
    return (1 - eta) * D - eta * wt;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mismatch(mid) > 0 ? lo : hi) = mid;
  }
  const double eta_star = 0.5 * (lo + hi);
  CHECK(eta_star == doctest::Approx(0.218).epsilon(0.01));

  SweepPlan p = plan_for(f, 2, false, false);
  p.axes = {SweepAxis::fixed_at(eta_star)};
  p.system = f.system;
  const MetricsReport at = evaluate_point(p, f.exact, GaugeVector{eta_star});
  CHECK(at.entropy_truncated < 1e-6);
  const MetricsReport half = evaluate_point(p, f.exact, GaugeVector{0.5});
  CHECK(half.entropy_truncated > 1e-3);

  // The grid argmin of S_trunc lands next to eta_star.
  SweepPlan grid = plan_for(f, 21, false, false);
  const SweepResult r = run_sweep(grid, f.exact);
  const double best = find_optimal(r, OptimalMetric::entropy_truncated)[0];
  CHECK(std::abs(best - eta_star) <= 0.05);
}
