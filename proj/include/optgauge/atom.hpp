#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "optgauge/common.hpp"
#include "optgauge/modes.hpp"

namespace optgauge {

/// How the kinetic and momentum operators are represented on the grid.
///  - central_difference: second-order three-point stencils (tridiagonal).
///  - sinc_dvr: sinc discrete variable representation, spectrally accurate;
///    dense operators on a much coarser grid.
enum class Discretization { central_difference, sinc_dvr };

const char* to_string(Discretization scheme);
Discretization discretization_from_string(const std::string& name);

/// Uniform 1D grid, endpoints included.
struct Grid {
  double x_min = -1.0;
  double x_max = 1.0;
  int n_points = 16;
  Discretization scheme = Discretization::sinc_dvr;

  static Grid centered(double center, double half_width, int n_points,
                       Discretization scheme = Discretization::sinc_dvr);

  double dx() const { return (x_max - x_min) / (n_points - 1); }
  double center() const { return 0.5 * (x_min + x_max); }
  double half_width() const { return 0.5 * (x_max - x_min); }
  double point(int j) const { return x_min + j * dx(); }
  RealVector points() const;

  /// Throws DimensionError if n_points < 16 or the spacing is not positive.
  void validate() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// V(x) = C x^4 - B x^2.
struct DoubleWell {
  double B = 4.0;
  double C = 1.0;
};

/// V(x) = omega0^2 x^2 / 2.
struct Harmonic {
  double omega0 = 1.0;
};

/// Potential sampled at arbitrary abscissae; linearly interpolated.
struct Tabulated {
  std::vector<double> x;
  std::vector<double> v;
};

struct PotentialSpec {
  std::variant<DoubleWell, Harmonic, Tabulated> kind = DoubleWell{};
  double shift = 0.0;  // d: V(x) -> V(x - d)
  double tilt = 0.0;   // adds tilt * x

  /// Double well with C = 1 and B = gamma^(1/3) (hbar = m = 1).
  static PotentialSpec double_well_from_gamma(double gamma);

  /// Anharmonicity parameter m B^3 / (hbar^2 C^2); zero for non double wells.
  double gamma() const;

  /// Natural length scale: the well position sqrt(B / 2C) for a double well,
  /// the oscillator length for a harmonic potential, the half-range for a table.
  double length_scale() const;

  double operator()(double x) const;
  RealVector sample(const Grid& grid) const;

  /// Throws ConfigError on non-positive B, C, omega0 or a malformed table.
  void validate() const;
};

/// Reads a two-column (x, V) text file. Blank lines and '#' comments skipped.
Tabulated load_tabulated_potential(const std::filesystem::path& path);

/// Default grid for a potential: centred on the shift d, half-width
/// 3.2 length scales, 48 points, sinc DVR.
Grid default_grid(const PotentialSpec& spec);

/// Atomic eigenpairs on a grid. Wavefunctions are stored column-wise and are
/// orthonormal under sum_j psi_i(x_j) psi_l(x_j) dx.
struct AtomBasis {
  Grid grid;
  RealVector energies;
  RealMatrix wavefunctions;  // n_points x n_levels
  /// eta_k^2 omega_k A_k^2 for each mode used in the potential; empty or all
  /// zero for the bare basis.
  std::vector<double> renormalization_weights;

  int n_levels() const { return static_cast<int>(energies.size()); }
  double transition() const { return energies(1) - energies(0); }
  double anharmonicity() const {
    return (energies(2) - energies(0)) / (energies(1) - energies(0));
  }
};

/// <eps_i|O|eps_j> for O in {x, p, x^2}; M x M.
struct MatrixElements {
  ComplexMatrix x;
  ComplexMatrix p;
  ComplexMatrix xsq;
};

/// Kinetic operator p^2/2 on the grid (real symmetric).
RealMatrix kinetic_matrix(const Grid& grid);

/// Momentum operator -i d/dx on the grid (Hermitian, purely imaginary).
ComplexMatrix momentum_matrix(const Grid& grid);

/// V(x_j - d) + tilt x_j + sum_k eta_k^2 omega_k A_k^2 x_j^2.
RealVector build_effective_potential(const PotentialSpec& spec,
                                     std::span<const ModeSpec> modes,
                                     const GaugeVector& gauge,
                                     const Grid& grid);

/// Lowest n_levels eigenpairs of p^2/2 + diag(potential). Requires
/// n_levels <= n_points / 4; throws DomainTooSmallError if a kept level has
/// boundary density above 1e-12.
AtomBasis solve_atom(const RealVector& potential, const Grid& grid,
                     int n_levels);

/// Like solve_atom on the effective potential, but widens the domain (same
/// spacing) until the boundary-density invariant holds.
AtomBasis solve_atom_adaptive(const PotentialSpec& spec,
                              std::span<const ModeSpec> modes,
                              const GaugeVector& gauge, Grid grid,
                              int n_levels, int max_widenings = 6);

MatrixElements matrix_elements(const AtomBasis& basis, int M);

/// A_1 such that g = A_1 |<eps_0|p|eps_1>| in the given (bare) basis.
double calibrate_vacuum_amplitude(const AtomBasis& basis, double g_target);

/// CSV summary: level energies, then x, p, x^2 tables for the lowest M levels.
void write_atom_csv(std::ostream& out, const AtomBasis& basis, int M);

}  // namespace optgauge
