#include "optgauge/runner.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "optgauge/photon.hpp"

namespace optgauge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json reference_key_parts(const RunConfig& c) {
  json p = physics_section(c);
  p.erase("truncation");
  return p;
}

std::string short_hash(const std::string& h) { return h.substr(0, 12); }

}  // namespace

ExactReference obtain_reference(const RunConfig& config, const CavitySystem& system,
                                const RunContext& ctx) {
  const std::string key = ResultCache::key("reference", reference_key_parts(config));
  if (ctx.cache) {
    if (auto hit = ctx.cache->load(key)) {
      ctx.note("exact reference: cache hit " + short_hash(key));
      return reference_from_json(*hit);
    }
  }
  ctx.note("exact reference: converging (cache key " + short_hash(key) + ")");
  ExactReference ref = prepare_reference(system, make_settings(config, system),
                                         make_targets(config, system));
  ctx.note("exact reference: " + ref.report.summary(system.delta));
  if (ctx.cache) ctx.cache->store(key, "reference", to_json(ref));
  return ref;
}

ExactSolution obtain_exact(const RunConfig& config, const CavitySystem& system,
                           const GaugeVector& gauge, const RunContext& ctx) {
  json parts = reference_key_parts(config);
  parts["gauge"] = gauge.values();
  const std::string key = ResultCache::key("exact", parts);
  if (ctx.cache) {
    if (auto hit = ctx.cache->load(key)) {
      ctx.note("exact spectrum: cache hit " + short_hash(key));
      return solution_from_json(*hit);
    }
  }
  ctx.note("exact spectrum: converging at eta = " + gauge.to_string());
  ExactSolution sol = converge(system, gauge, make_settings(config, system),
                               make_targets(config, system));
  ctx.note("exact spectrum: " + sol.report.summary(system.delta));
  // Only the ground state is kept.
  if (sol.spectrum.vectors.cols() > 1) {
    sol.spectrum.vectors = sol.spectrum.vectors.leftCols(1).eval();
  }
  if (ctx.cache) ctx.cache->store(key, "exact", to_json(sol));
  return sol;
}

SweepResult obtain_sweep(const RunConfig& config, const CavitySystem& system,
                         const RunContext& ctx) {
  if (config.axes.empty()) throw ConfigError("/sweep", "no sweep section in config");
  const ExactReference ref = obtain_reference(config, system, ctx);
  if (!ref.gauge_verified) {
    ctx.note("warning: exact spectra in the two check gauges differ by " +
             std::to_string(ref.check_deviation / system.delta) + " Delta");
  }
  const SweepPlan plan = make_plan(config, system, ctx.jobs);

  json base = physics_section(config);
  base["fidelity"] = config.compute_fidelity;
  base["entropy"] = config.compute_entropy;
  SweepCacheHooks hooks;
  if (ctx.cache) {
    hooks.lookup = [&](const GaugeVector& g) -> std::optional<MetricsReport> {
      json parts = base;
      parts["gauge"] = g.values();
      if (auto hit = ctx.cache->load(ResultCache::key("point", parts))) {
        return metrics_from_json(*hit);
      }
      return std::nullopt;
    };
    hooks.store = [&](const MetricsReport& m) {
      json parts = base;
      parts["gauge"] = m.gauge.values();
      ctx.cache->store(ResultCache::key("point", parts), "point", to_json(m));
    };
  }
  ctx.note("sweep: " + std::to_string(plan.point_count()) + " points on " +
           std::to_string(ctx.jobs) + " worker(s)");
  SweepResult result = run_sweep(plan, ref, ctx.cache ? &hooks : nullptr);
  int cached = 0;
  for (const auto& p : result.points) cached += p.from_cache ? 1 : 0;
  ctx.note("sweep: done, " + std::to_string(cached) + " from cache, " +
           std::to_string(result.flagged()) + " flagged");
  return result;
}

RealVector truncated_excitations(const CavitySystem& system, const ExactReference& exact,
                                 BasisKind basis, int levels, const GaugeVector& gauge,
                                 int energies) {
  const TruncatedModel model = build_truncated_model(
      basis, levels, system.modes, gauge, exact.settings.grid, system.potential);
  const FockSpace fock(exact.settings.cutoffs);
  EigenRequest req;
  req.k = energies + 1;
  req.want_vectors = false;
  const EigenResult r = lowest_eigenpairs(assemble_truncated(model, fock), req);
  return excitation_energies(r.values, energies) / system.delta;
}

// ---------------------------------------------------------------- figures

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig1a", "fig1b", "fig2",
                                              "fig3",  "fig4",  "fig5"};
  return names;
}

namespace {

RunConfig preset(std::vector<double> freqs, double g, std::vector<int> cutoffs,
                 std::optional<double> tol) {
  RunConfig c;
  c.potential = PotentialSpec::double_well_from_gamma(64.0);
  c.frequencies = std::move(freqs);
  c.coupling = g;
  c.cutoffs = std::move(cutoffs);
  c.gauge = GaugeVector::dipole(c.frequencies.size());
  if (tol) c.tol = *tol;
  return c;
}

std::string tag(double x) {
  std::ostringstream s;
  s << x;
  std::string out = s.str();
  for (char& ch : out) {
    if (ch == '.') ch = 'p';
  }
  return out;
}

std::vector<fs::path> spectrum_vs_coupling(const std::string& name,
                                           std::vector<double> freqs,
                                           std::vector<int> cutoffs, const fs::path& dir,
                                           const RunContext& ctx,
                                           std::optional<double> tol) {
  constexpr int kPoints = 31;
  constexpr int M = 7;
  const RunConfig base = preset(freqs, 0.0, cutoffs, tol);

  std::ostringstream rows;
  rows << std::setprecision(12);
  int unconverged = 0;
  std::string last_summary;
  for (int i = 0; i < kPoints; ++i) {
    RunConfig c = base;
    c.coupling = 1.5 * i / (kPoints - 1);
    const CavitySystem sys = make_system(c);
    const ExactReference ref = obtain_reference(c, sys, ctx);
    const RealVector exact = excitation_energies(ref.eigenvalues, M) / sys.delta;
    const GaugeVector eta = GaugeVector::dipole(freqs.size());
    const RealVector bare = truncated_excitations(sys, ref, BasisKind::bare, 2, eta, M);
    const RealVector ren =
        truncated_excitations(sys, ref, BasisKind::renormalized, 2, eta, M);
    rows << c.coupling;
    for (const RealVector* v : {&exact, &bare, &ren}) {
      for (int j = 0; j < M; ++j) rows << ',' << (*v)(j);
    }
    rows << ',' << spectral_deviation(exact, bare) << ',' << spectral_deviation(exact, ren)
         << ',' << (ref.report.converged ? 1 : 0) << '\n';
    unconverged += ref.report.converged ? 0 : 1;
    last_summary = ref.report.summary(sys.delta);
    ctx.note(name + ": g = " + std::to_string(c.coupling) + " done");
  }

  fs::create_directories(dir);
  const fs::path path = dir / (name + ".csv");
  std::ofstream out(path);
  FileHeader h;
  h.title = name + ": excitation energies vs g at eta = 1 (units of Delta)";
  h.config_hash = config_hash(base) + " (g varies per row)";
  h.convergence = std::to_string(kPoints - unconverged) + "/" + std::to_string(kPoints) +
                  " rows converged; at g = 1.5: " + last_summary;
  h.columns = {"columns: g, exact_1..7, bare_1..7 (P0 truncation), renormalized_1..7 "
               "(P_eta truncation), sigma_bare, sigma_renormalized, converged"};
  write_header(out, h);
  out << "g";
  for (const char* p : {"exact", "bare", "renormalized"}) {
    for (int i = 1; i <= M; ++i) out << ',' << p << '_' << i;
  }
  out << ",sigma_bare,sigma_renormalized,converged\n" << rows.str();
  return {path};
}

std::vector<fs::path> sweep_panel(const std::string& name, RunConfig c,
                                  std::vector<OptimalMetric> metrics,
                                  const fs::path& dir, const RunContext& ctx) {
  c.metrics = metrics;
  const CavitySystem sys = make_system(c);
  const SweepResult r = obtain_sweep(c, sys, ctx);
  return write_sweep_bundle(dir, name, r, metrics, config_hash(c));
}

}  // namespace

std::vector<fs::path> reproduce_figure(const std::string& name, const fs::path& dir,
                                       const RunContext& ctx, std::optional<double> tol) {
  const auto eta_range = SweepAxis::range(0.0, 1.0, 21);
  std::vector<fs::path> written;
  auto append = [&](std::vector<fs::path> more) {
    written.insert(written.end(), more.begin(), more.end());
  };

  if (name == "fig1a") {
    return spectrum_vs_coupling(name, {1.0}, {16}, dir, ctx, tol);
  }
  if (name == "fig1b") {
    return spectrum_vs_coupling(name, {1.0, 20.0}, {14, 6}, dir, ctx, tol);
  }
  if (name == "fig2") {
    for (double w : {0.5, 1.0, 5.0, 10.0}) {
      RunConfig c = preset({w}, 0.8, {w < 1.0 ? 20 : 14}, tol);
      c.axes = {eta_range};
      append(sweep_panel("fig2_omega_" + tag(w), c,
                         {OptimalMetric::sigma, OptimalMetric::infidelity}, dir, ctx));
    }
    return written;
  }
  if (name == "fig3") {
    const std::vector<std::pair<double, std::vector<int>>> panels{
        {0.5, {12, 16}}, {10.0, {12, 6}}, {30.0, {12, 4}}, {200.0, {12, 4}}};
    for (const auto& [w2, cut] : panels) {
      RunConfig c = preset({1.0, w2}, 0.6, cut, tol);
      c.axes = {eta_range, eta_range};
      c.compute_fidelity = false;
      c.compute_entropy = false;
      append(sweep_panel("fig3_omega2_" + tag(w2), c, {OptimalMetric::sigma}, dir, ctx));
    }
    return written;
  }
  if (name == "fig4") {
    const std::vector<std::pair<std::vector<double>, std::vector<int>>> panels{
        {{10.0, 30.0, 1.0}, {6, 4, 12}}, {{50.0, 150.0, 1.0}, {4, 4, 12}}};
    for (const auto& [w, cut] : panels) {
      RunConfig c = preset(w, 0.6, cut, tol);
      c.axes = {eta_range, eta_range, SweepAxis::fixed_at(1.0)};
      c.compute_fidelity = false;
      c.compute_entropy = false;
      append(sweep_panel("fig4_omega_" + tag(w[0]) + "_" + tag(w[1]) + "_" + tag(w[2]),
                         c, {OptimalMetric::sigma}, dir, ctx));
    }
    return written;
  }
  if (name == "fig5") {
    const std::vector<OptimalMetric> all{OptimalMetric::sigma, OptimalMetric::infidelity,
                                         OptimalMetric::entropy_gap,
                                         OptimalMetric::entropy_truncated,
                                         OptimalMetric::entropy_full};
    for (double g : {0.4, 1.2}) {
      RunConfig c = preset({1.0}, g, {g > 1.0 ? 20 : 14}, tol);
      c.axes = {eta_range};
      append(sweep_panel("fig5_single_g_" + tag(g), c, all, dir, ctx));
    }
    RunConfig c = preset({1.0, 20.0}, 0.6, {14, 6}, tol);
    c.axes = {SweepAxis::fixed_at(1.0), eta_range};
    append(sweep_panel("fig5_two_mode", c, all, dir, ctx));
    return written;
  }
  throw ConfigError("figure", "unknown figure '" + name + "' (expected fig1a, fig1b, "
                              "fig2, fig3, fig4 or fig5)");
}

}  // namespace optgauge
