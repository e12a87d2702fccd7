#pragma once

#include <span>
#include <vector>

#include "optgauge/atom.hpp"
#include "optgauge/modes.hpp"

namespace optgauge {

/// A physical configuration with every quantity resolved to absolute units.
/// Mode frequencies and the coupling are specified in units of the bare
/// transition Delta, which is only known after a bare atom solve.
struct CavitySystem {
  PotentialSpec potential;
  std::vector<ModeSpec> modes;
  double delta = 1.0;                    // bare eps_1 - eps_0
  double coupling = 0.0;                 // g (absolute)
  std::vector<double> frequencies_in_delta;
  double coupling_in_delta = 0.0;

  int mode_count() const { return static_cast<int>(modes.size()); }
};

/// Solves the bare atom on `grid` (widening it if needed), then sets
/// omega_k = w_k Delta and A_k = A_1 with g = A_1 |<eps_0|p|eps_1>|.
CavitySystem resolve_system(const PotentialSpec& potential,
                            std::span<const double> frequencies_in_delta,
                            double coupling_in_delta, const Grid& grid);

/// Grid and per-mode photon cutoffs for one exact calculation.
struct NumericalSettings {
  Grid grid;
  std::vector<int> cutoffs;

  friend bool operator==(const NumericalSettings&,
                         const NumericalSettings&) = default;
};

/// Default grid for the potential and n_max = 10 per mode.
NumericalSettings default_settings(const CavitySystem& system);

}  // namespace optgauge
