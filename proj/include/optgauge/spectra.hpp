#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "optgauge/common.hpp"
#include "optgauge/kronecker.hpp"
#include "optgauge/modes.hpp"
#include "optgauge/system.hpp"

namespace optgauge {

/// Hermitian operator given by its action on a block of column vectors.
struct LinearOperator {
  int dimension = 0;
  std::function<void(const ComplexMatrix&, ComplexMatrix&)> apply;
};

LinearOperator make_operator(const KroneckerSum& op);
LinearOperator make_operator(const ComplexMatrix& dense);

enum class EigenMethod { automatic, krylov, dense };

struct EigenRequest {
  int k = 1;                 // lowest k eigenpairs
  double tol = 1e-10;        // residual bound tol * max(1, |lambda|)
  bool want_vectors = true;
  EigenMethod method = EigenMethod::automatic;
  int dense_threshold = 800; // automatic: dense at or below this dimension
  int block_size = 2;
  int max_basis = 0;         // 0: chosen from k and the block size
  long max_matvecs = 400000;
};

struct EigenResult {
  RealVector values;       // ascending
  ComplexMatrix vectors;   // columns, orthonormal (empty unless requested)
  RealVector residuals;    // ||H v - lambda v|| (Ritz estimate for Krylov)
  long matvecs = 0;
  int restarts = 0;
};

/// Lowest eigenpairs of a Hermitian operator by thick-restart block Lanczos
/// with full reorthogonalization. The start block is fixed (first column
/// all-ones normalized) so results are bitwise reproducible. Throws
/// ConvergenceError if the matvec budget runs out.
EigenResult lowest_eigenpairs(const LinearOperator& op, const EigenRequest& req);
EigenResult lowest_eigenpairs(const KroneckerSum& op, const EigenRequest& req);

/// Reference path: full dense diagonalization.
EigenResult dense_eigenpairs(const ComplexMatrix& h, int k, bool want_vectors);

struct EscalationStep {
  enum class Knob { initial, grid, cutoffs };
  Knob knob = Knob::initial;
  NumericalSettings settings;
  int dimension = 0;
  RealVector eigenvalues;
  double drift = 0.0;  // max |E_i - E_i(previous)|, absolute energy
};

const char* to_string(EscalationStep::Knob knob);

struct ConvergenceReport {
  NumericalSettings final_settings;
  /// The coarsest grid and cutoffs whose own escalation drifted below tol.
  NumericalSettings verified_settings;
  std::vector<EscalationStep> steps;
  bool converged = false;
  double tol = 0.0;  // absolute energy
  int k = 0;

  std::string summary(double energy_unit = 1.0) const;
  /// Drifts of the same knob are non-increasing over its last two escalations.
  bool drifts_monotone() const;
};

struct ConvergenceTargets {
  int k = 8;
  double tol = 1e-6;        // absolute energy
  int max_escalations = 8;
  std::size_t max_dimension = 600'000;
  int cutoff_step = 4;
};

struct ExactSolution {
  ConvergenceReport report;
  EigenResult spectrum;  // at report.final_settings; ground state vector kept
};

/// One exact solve: lowest k eigenpairs of the full Hamiltonian. The
/// residual tolerance is tol / 100 so eigenvalues are good to well below tol.
EigenResult solve_exact(const CavitySystem& system, const GaugeVector& gauge,
                        const NumericalSettings& settings, int k, double tol,
                        bool want_vectors = true);

/// Escalates the grid (n_points -> 2 n_points - 1, same domain) and the
/// cutoffs (+cutoff_step) alternately until both knobs have an escalation
/// whose drift in the lowest k eigenvalues is below tol. A knob is not
/// escalated again once settled. On budget exhaustion returns converged=false.
ExactSolution converge(const CavitySystem& system, const GaugeVector& gauge,
                       const NumericalSettings& start,
                       const ConvergenceTargets& targets);

}  // namespace optgauge
