#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "optgauge/runner.hpp"

namespace fs = std::filesystem;
using namespace optgauge;

namespace {

struct Options {
  std::string config;
  int jobs = 1;
  std::string out;
  double tol = 0.0;
  bool no_cache = false;
  std::string gauge;
  int levels = 6;
  std::string figure;
};

void log_line(const std::string& line) {
  static const auto start = std::chrono::steady_clock::now();
  const double t =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "[optgauge %7.1fs] %s\n", t, line.c_str());
}

RunConfig read_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config", "a config file is required");
  RunConfig c = load_config(o.config);
  if (o.tol > 0.0) c.tol = o.tol;
  if (!o.out.empty()) c.output = o.out;
  return c;
}

fs::path output_dir(const Options& o, const RunConfig* c) {
  if (!o.out.empty()) return o.out;
  return c ? fs::path(c->output) : fs::path("out");
}

GaugeVector parse_gauge(const std::string& text, std::size_t modes) {
  std::vector<double> eta;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      eta.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("--gauge", "not a number: '" + item + "'");
    }
  }
  if (eta.size() == 1) return GaugeVector::uniform(modes, eta[0]);
  if (eta.size() != modes) throw ConfigError("--gauge", "need one value per mode");
  return GaugeVector(eta);
}

int cmd_atom(const Options& o) {
  const nlohmann::json doc =
      o.config.empty() ? nlohmann::json::object() : read_json_file(o.config);
  const PotentialSpec potential = parse_potential_section(doc);
  const int levels = std::max(o.levels, 3);
  const AtomBasis basis =
      solve_atom_adaptive(potential, {}, GaugeVector{}, default_grid(potential), levels);
  const MatrixElements me = matrix_elements(basis, std::min(levels, 4));

  std::cout << std::setprecision(10);
  std::cout << "grid: " << basis.grid.n_points << " points on [" << basis.grid.x_min
            << ", " << basis.grid.x_max << "] (" << to_string(basis.grid.scheme) << ")\n";
  if (potential.gamma() > 0.0) std::cout << "gamma: " << potential.gamma() << '\n';
  for (int i = 0; i < basis.n_levels(); ++i) {
    std::cout << "eps_" << i << " = " << basis.energies(i) << '\n';
  }
  std::cout << "Delta = eps_1 - eps_0 = " << basis.transition() << '\n';
  std::cout << "(eps_2 - eps_0) / Delta = " << basis.anharmonicity() << '\n';
  std::cout << "|<0|x|1>| = " << std::abs(me.x(0, 1)) << "   |<0|p|1>| = "
            << std::abs(me.p(0, 1)) << '\n';

  const fs::path dir = output_dir(o, nullptr);
  fs::create_directories(dir);
  std::ofstream csv(dir / "atom.csv");
  FileHeader h;
  h.title = "bare atom: levels and matrix elements";
  h.config_hash = sha256_hex(to_json(potential).dump());
  h.convergence = "single grid solve, boundary density checked (no photons)";
  write_header(csv, h);
  write_atom_csv(csv, basis, std::min(levels, 4));
  log_line("wrote " + (dir / "atom.csv").string());
  return 0;
}

int cmd_exact(const Options& o, const RunContext& ctx) {
  const RunConfig c = read_config(o);
  const GaugeVector gauge = o.gauge.empty() ? c.gauge : parse_gauge(o.gauge, c.frequencies.size());
  const CavitySystem sys = make_system(c);
  const ExactSolution sol = obtain_exact(c, sys, gauge, ctx);

  const RealVector& e = sol.spectrum.values;
  std::cout << std::setprecision(12);
  std::cout << "Delta = " << sys.delta << ", g = " << sys.coupling << ", eta = "
            << gauge.to_string() << '\n';
  std::cout << sol.report.summary(sys.delta) << '\n';
  for (int i = 0; i < e.size(); ++i) {
    std::cout << "E_" << i << " = " << e(i) << "   (E_" << i << " - E_0) / Delta = "
              << (e(i) - e(0)) / sys.delta << '\n';
  }

  const fs::path dir = output_dir(o, &c);
  fs::create_directories(dir);
  const std::string hash = config_hash(c);
  FileHeader h;
  h.title = "exact spectrum at eta = " + gauge.to_string();
  h.config_hash = hash;
  h.convergence = sol.report.summary(sys.delta);
  h.columns = {"energies absolute (hbar = m = q = 1); excitation in units of Delta"};
  {
    std::ofstream out(dir / "exact.csv");
    write_header(out, h);
    out << "index,energy,excitation_in_delta,residual\n" << std::setprecision(15);
    for (int i = 0; i < e.size(); ++i) {
      out << i << ',' << e(i) << ',' << (e(i) - e(0)) / sys.delta << ','
          << sol.spectrum.residuals(i) << '\n';
    }
  }
  {
    std::ofstream out(dir / "exact.json");
    nlohmann::json j{{"config_hash", hash},
                     {"gauge", gauge.values()},
                     {"delta", sys.delta},
                     {"coupling", sys.coupling},
                     {"eigenvalues", std::vector<double>(e.data(), e.data() + e.size())},
                     {"convergence", to_json(sol.report)}};
    out << j.dump(2) << '\n';
  }
  log_line("wrote " + (dir / "exact.csv").string() + " and exact.json");
  return sol.report.converged ? 0 : 3;
}

int cmd_sweep(const Options& o, const RunContext& ctx) {
  const RunConfig c = read_config(o);
  const CavitySystem sys = make_system(c);
  const SweepResult r = obtain_sweep(c, sys, ctx);
  const fs::path dir = output_dir(o, &c);
  const auto files = write_sweep_bundle(dir, "sweep", r, c.metrics, config_hash(c));
  for (auto m : c.metrics) {
    try {
      std::cout << "argmin " << to_string(m) << ": eta = "
                << find_optimal(r, m).to_string() << '\n';
    } catch (const Error& e) {
      std::cout << "argmin " << to_string(m) << ": " << e.what() << '\n';
    }
  }
  if (r.flagged() > 0) std::cout << r.flagged() << " point(s) flagged; see sweep.json\n";
  for (const auto& f : files) log_line("wrote " + f.string());
  return 0;
}

int cmd_reproduce(const Options& o, const RunContext& ctx) {
  const fs::path dir = output_dir(o, nullptr) / o.figure;
  std::optional<double> tol;
  if (o.tol > 0.0) tol = o.tol;
  const auto files = reproduce_figure(o.figure, dir, ctx, tol);
  for (const auto& f : files) std::cout << f.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-gauge toolkit for multimode cavity QED"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  Options o;
  app.add_option("--config", o.config, "JSON config file");
  app.add_option("--jobs", o.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--tol", o.tol, "eigenvalue drift target in units of Delta")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-cache", o.no_cache, "neither read nor write the result cache");

  auto* atom = app.add_subcommand("atom", "bare atomic levels and matrix elements");
  atom->add_option("--levels", o.levels, "number of levels to print")->check(CLI::Range(3, 64));
  auto* exact = app.add_subcommand("exact", "converged exact spectrum at one gauge");
  exact->add_option("--gauge", o.gauge, "eta (one value or comma-separated per mode)");
  auto* sweep = app.add_subcommand("sweep", "gauge sweep as configured");
  auto* reproduce = app.add_subcommand("reproduce", "data for one of the figures");
  reproduce->add_option("figure", o.figure, "fig1a | fig1b | fig2 | fig3 | fig4 | fig5")
      ->required()
      ->check(CLI::IsMember(figure_names()));
  auto* cache = app.add_subcommand("cache", "inspect or clear the result cache");
  cache->require_subcommand(1);
  auto* cache_list = cache->add_subcommand("list", "list cache entries");
  auto* cache_clear = cache->add_subcommand("clear", "remove all cache entries");

  // Global options are accepted after the subcommand as well.
  for (auto* sub : {atom, exact, sweep, reproduce}) sub->fallthrough();
  app.fallthrough();

  CLI11_PARSE(app, argc, argv);

  const ResultCache store(ResultCache::default_directory());
  RunContext ctx;
  ctx.cache = o.no_cache ? nullptr : &store;
  ctx.jobs = o.jobs;
  ctx.log = log_line;

  try {
    if (*atom) return cmd_atom(o);
    if (*exact) return cmd_exact(o, ctx);
    if (*sweep) return cmd_sweep(o, ctx);
    if (*reproduce) return cmd_reproduce(o, ctx);
    if (*cache_list) {
      std::cout << "cache directory: " << store.directory().string() << '\n';
      for (const auto& e : store.list()) {
        std::cout << e.key << "  " << std::setw(9) << e.kind << "  v" << e.version << "  "
                  << e.bytes << " bytes\n";
      }
      return 0;
    }
    if (*cache_clear) {
      std::cout << "removed " << store.clear() << " entries from "
                << store.directory().string() << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
