#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "optgauge/cache.hpp"
#include "optgauge/config.hpp"
#include "optgauge/report.hpp"

namespace optgauge {

/// Shared state for one invocation: optional cache, worker count, logger.
struct RunContext {
  const ResultCache* cache = nullptr;
  int jobs = 1;
  std::function<void(const std::string&)> log;

  void note(const std::string& line) const {
    if (log) log(line);
  }
};

/// Converged exact reference (dipole gauge, checked in the Coulomb gauge),
/// read from or written to the cache.
ExactReference obtain_reference(const RunConfig& config, const CavitySystem& system,
                                const RunContext& ctx);

/// Converged exact spectrum and ground state at one gauge.
ExactSolution obtain_exact(const RunConfig& config, const CavitySystem& system,
                           const GaugeVector& gauge, const RunContext& ctx);

/// Full sweep as configured; per-point results are cached individually.
SweepResult obtain_sweep(const RunConfig& config, const CavitySystem& system,
                         const RunContext& ctx);

/// Lowest excitation energies (units of Delta) of a truncated model at the
/// reference settings.
RealVector truncated_excitations(const CavitySystem& system, const ExactReference& exact,
                                 BasisKind basis, int levels, const GaugeVector& gauge,
                                 int energies);

const std::vector<std::string>& figure_names();

/// Runs the preset for one figure and writes its data files under dir.
/// Throws ConfigError for an unknown name.
std::vector<std::filesystem::path> reproduce_figure(const std::string& name,
                                                    const std::filesystem::path& dir,
                                                    const RunContext& ctx,
                                                    std::optional<double> tol = {});

}  // namespace optgauge
