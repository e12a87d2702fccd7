#include "optgauge/system.hpp"

#include <algorithm>

namespace optgauge {

CavitySystem resolve_system(const PotentialSpec& potential,
                            std::span<const double> frequencies_in_delta,
                            double coupling_in_delta, const Grid& grid) {
  potential.validate();
  if (frequencies_in_delta.empty()) {
    throw ConfigError("/modes/frequencies", "at least one mode is required");
  }
  for (double w : frequencies_in_delta) {
    if (!(w > 0.0)) throw ConfigError("/modes/frequencies", "must be positive");
  }
  if (!(coupling_in_delta >= 0.0)) {
    throw ConfigError("/modes/coupling", "must be non-negative");
  }
  const int levels = std::min(3, grid.n_points / 4);
  const AtomBasis bare =
      solve_atom_adaptive(potential, {}, GaugeVector{}, grid, levels);

  CavitySystem system;
  system.potential = potential;
  system.delta = bare.transition();
  system.coupling = coupling_in_delta * system.delta;
  system.frequencies_in_delta.assign(frequencies_in_delta.begin(),
                                     frequencies_in_delta.end());
  system.coupling_in_delta = coupling_in_delta;
  const double amplitude = calibrate_vacuum_amplitude(bare, system.coupling);
  for (double w : frequencies_in_delta) {
    system.modes.push_back(ModeSpec{w * system.delta, amplitude});
  }
  return system;
}

NumericalSettings default_settings(const CavitySystem& system) {
  return NumericalSettings{default_grid(system.potential),
                           std::vector<int>(system.modes.size(), 10)};
}

}  // namespace optgauge
