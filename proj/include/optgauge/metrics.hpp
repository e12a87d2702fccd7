#pragma once

#include <cmath>
#include <span>

#include "optgauge/atom.hpp"
#include "optgauge/common.hpp"
#include "optgauge/modes.hpp"

namespace optgauge {

/// Gauge-quality metrics for one gauge point. sigma is in units of Delta,
/// entropies use the natural logarithm.
struct MetricsReport {
  GaugeVector gauge;
  int energies = 7;
  double sigma = 0.0;
  double fidelity = 0.0;
  double entropy_full = 0.0;
  double entropy_truncated = 0.0;

  double infidelity() const { return 1.0 - fidelity; }
  double entropy_gap() const { return std::abs(entropy_full - entropy_truncated); }
};

/// E_i - E_0 for i = 1..M from ascending eigenvalues.
RealVector excitation_energies(const RealVector& eigenvalues, int M);

/// sqrt(sum_i (E_i - E'_i)^2 / M) over excitation energies.
double spectral_deviation(std::span<const double> exact,
                          std::span<const double> truncated);
double spectral_deviation(const RealVector& exact, const RealVector& truncated);

/// Maps c_{i,n} on (levels (x) Fock) to sum_i c_{i,n} psi_i(x_j) sqrt(dx) on
/// (grid (x) Fock). Throws DimensionError if the sizes are inconsistent.
ComplexVector embed_truncated_state(const ComplexVector& state,
                                    const AtomBasis& basis, int levels,
                                    int fock_dim);

/// Inverse of the embedding on its image: projects a grid state onto the
/// lowest `levels` basis states.
ComplexVector project_to_levels(const ComplexVector& full_state,
                                const AtomBasis& basis, int levels,
                                int fock_dim);

/// |<a|b>|^2. Throws NormError if either norm deviates from 1 by > 1e-6.
double ground_state_fidelity(const ComplexVector& a, const ComplexVector& b);

/// Squared Schmidt coefficients of a bipartite pure state (descending).
RealVector schmidt_weights(const ComplexVector& state, int atom_dim,
                           int fock_dim);

enum class Subsystem { atom, photons };

/// Reduced density matrix of the named subsystem (the other is traced out).
ComplexMatrix reduced_density_matrix(const ComplexVector& state, int atom_dim,
                                     int fock_dim, Subsystem keep);

/// -Tr rho ln rho; eigenvalues below 1e-24 (singular values below 1e-12)
/// are dropped.
double von_neumann_entropy(const ComplexMatrix& rho);

/// Entropy of the photonic reduced state via the Schmidt decomposition.
double entanglement_entropy(const ComplexVector& state, int atom_dim,
                            int fock_dim);

}  // namespace optgauge
