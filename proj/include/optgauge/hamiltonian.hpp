#pragma once

#include <optional>
#include <span>
#include <vector>

#include "optgauge/atom.hpp"
#include "optgauge/kronecker.hpp"
#include "optgauge/modes.hpp"
#include "optgauge/photon.hpp"

namespace optgauge {

/// Photonic factors shared by the exact and truncated mixed-gauge models:
///   coulomb = sum_k (1 - eta_k) A_k (b_k + b_k^dagger)     (couples to p)
///   dipole  = -sum_k eta_k omega_k A_k i(b_k^dagger - b_k) (couples to x)
///   free    = photonic_hamiltonian(...)                    (A^2 term included)
struct PhotonicFactors {
  SparseMatrix coulomb;
  SparseMatrix dipole;
  SparseMatrix free;
};

PhotonicFactors photonic_factors(const FockSpace& fock,
                                 std::span<const ModeSpec> modes,
                                 const GaugeVector& gauge);

/// Exact mixed-gauge Hamiltonian on (grid) (x) (Fock space).
struct FullHamiltonian {
  KroneckerSum op;
  Grid grid;
  PotentialSpec potential;
  std::vector<ModeSpec> modes;
  GaugeVector gauge;
  FockSpace fock;

  int dimension() const { return op.dimension(); }
};

/// H = [p^2/2 + V_eff] (x) 1 + p (x) coulomb + x (x) dipole + 1 (x) free.
/// Throws HermiticityError if the assembled operator is not Hermitian to
/// 1e-12 relative.
FullHamiltonian assemble_full(const Grid& grid, const PotentialSpec& potential,
                              std::span<const ModeSpec> modes,
                              const GaugeVector& gauge, const FockSpace& fock);

enum class BasisKind { bare, renormalized };

const char* to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// M-level projection of the mixed-gauge Hamiltonian. For the bare basis the
/// atomic levels are eigenstates of p^2/2 + V; for the renormalized basis
/// they include the gauge-dependent x^2 term, which is then absent from the
/// projected atomic block.
struct TruncatedModel {
  int levels = 2;
  BasisKind basis_kind = BasisKind::bare;
  AtomBasis basis;  // exactly `levels` levels
  MatrixElements elements;
  std::vector<ModeSpec> modes;
  GaugeVector gauge;

  /// Two-level coefficients (always filled from the lowest two levels).
  double splitting = 0.0;          // Delta or Delta^(eta)
  std::vector<double> delta;       // delta_k; empty for the renormalized basis
  std::vector<double> g_coulomb;   // i A_k <0|p|1>, real
  std::vector<double> g_dipole;    // omega_k A_k <0|x|1>
  bool near_degenerate = false;    // splitting below 1e-8 of the level scale

  /// Projected atomic block (levels x levels) including the renormalization
  /// x^2 term for the bare basis.
  ComplexMatrix atomic_block() const;
};

TruncatedModel build_truncated_model(BasisKind kind, int levels,
                                     std::span<const ModeSpec> modes,
                                     const GaugeVector& gauge, const Grid& grid,
                                     const PotentialSpec& potential);

/// Matrix on (M levels) (x) (Fock space), atomic slot first, with the full
/// photonic Hamiltonian (A^2 term and mode-mode coupling) kept.
KroneckerSum assemble_truncated(const TruncatedModel& model,
                                const FockSpace& fock);

}  // namespace optgauge
