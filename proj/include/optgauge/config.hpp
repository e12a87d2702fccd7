#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optgauge/hamiltonian.hpp"
#include "optgauge/spectra.hpp"
#include "optgauge/sweep.hpp"

namespace optgauge {

std::string tool_version();

/// Everything one run needs. Mode frequencies and the coupling are in units
/// of the bare transition Delta; tolerances too.
struct RunConfig {
  PotentialSpec potential;
  std::vector<double> frequencies{1.0};  // hbar omega_k / Delta
  double coupling = 0.8;                 // g / Delta

  GaugeVector gauge{1.0};                // used by `exact`
  std::vector<SweepAxis> axes;           // used by `sweep` (one per mode)
  std::vector<OptimalMetric> metrics{OptimalMetric::sigma};
  bool compute_fidelity = true;
  bool compute_entropy = true;

  BasisKind basis = BasisKind::bare;
  int levels = 2;
  int energies = 7;

  std::optional<Grid> grid;              // default_grid(potential) if unset
  std::vector<int> cutoffs;              // 10 per mode if empty
  double tol = 1e-6;                     // eigenvalue drift target, units of Delta
  int k = 0;                             // 0: energies + 1
  int max_escalations = 8;
  std::size_t max_dimension = 600'000;
  int cutoff_step = 4;
  double eigen_tol = 1e-10;              // residual bound for sweep-point solves
  std::size_t max_points = 100'000;

  std::string output = "out";

  int mode_count() const { return static_cast<int>(frequencies.size()); }
  int eigen_count() const { return k > 0 ? k : energies + 1; }
};

/// Parses and validates; every problem is reported as a ConfigError whose
/// field() is a JSON pointer such as "/modes/frequencies/1".
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Reads a JSON document (comments allowed); ConfigError on syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Only the "potential" section of a config document (the gamma = 64
/// double well if absent); other sections are ignored.
PotentialSpec parse_potential_section(const nlohmann::json& doc);

/// The "potential" section in canonical form (B and C explicit).
nlohmann::json to_json(const PotentialSpec& potential);

/// Canonical JSON (all defaults filled in). parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

/// The physics-relevant subset: potential, modes, truncation and numerics.
/// Output paths, job counts and sweep axes do not enter.
nlohmann::json physics_section(const RunConfig& config);

std::string sha256_hex(std::string_view data);

/// SHA-256 of the canonical dump of physics_section.
std::string config_hash(const RunConfig& config);

/// Resolves Delta and the absolute mode parameters.
CavitySystem make_system(const RunConfig& config);
NumericalSettings make_settings(const RunConfig& config, const CavitySystem& system);
ConvergenceTargets make_targets(const RunConfig& config, const CavitySystem& system);
SweepPlan make_plan(const RunConfig& config, const CavitySystem& system, int jobs);

}  // namespace optgauge
