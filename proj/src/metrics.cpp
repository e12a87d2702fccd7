#include "optgauge/metrics.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace optgauge {

RealVector excitation_energies(const RealVector& eigenvalues, int M) {
  if (M < 1) throw DimensionError("need at least one excitation energy");
  if (eigenvalues.size() < M + 1) {
    throw DimensionError("need " + std::to_string(M + 1) + " eigenvalues, got " +
                         std::to_string(eigenvalues.size()));
  }
  return eigenvalues.segment(1, M).array() - eigenvalues(0);
}

double spectral_deviation(std::span<const double> exact,
                          std::span<const double> truncated) {
  if (exact.size() != truncated.size() || exact.empty()) {
    throw DimensionError("spectral deviation needs equal, non-empty lists");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double d = exact[i] - truncated[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(exact.size()));
}

double spectral_deviation(const RealVector& exact, const RealVector& truncated) {
  return spectral_deviation(std::span<const double>(exact.data(), exact.size()),
                            std::span<const double>(truncated.data(), truncated.size()));
}

namespace {

RealMatrix scaled_levels(const AtomBasis& basis, int levels) {
  if (levels < 1 || levels > basis.wavefunctions.cols()) {
    throw DimensionError("basis has fewer levels than requested");
  }
  return basis.wavefunctions.leftCols(levels) * std::sqrt(basis.grid.dx());
}

}  // namespace

ComplexVector embed_truncated_state(const ComplexVector& state,
                                    const AtomBasis& basis, int levels,
                                    int fock_dim) {
  if (state.size() != static_cast<Eigen::Index>(levels) * fock_dim) {
    throw DimensionError("truncated state has the wrong length");
  }
  const RealMatrix u = scaled_levels(basis, levels);
  Eigen::Map<const RowMajorComplexMatrix> c(state.data(), levels, fock_dim);
  ComplexVector out(u.rows() * fock_dim);
  Eigen::Map<RowMajorComplexMatrix> g(out.data(), u.rows(), fock_dim);
  g.noalias() = u.cast<cplx>() * c;
  return out;
}

ComplexVector project_to_levels(const ComplexVector& full_state,
                                const AtomBasis& basis, int levels,
                                int fock_dim) {
  const RealMatrix u = scaled_levels(basis, levels);
  if (full_state.size() != u.rows() * fock_dim) {
    throw DimensionError("grid state has the wrong length");
  }
  Eigen::Map<const RowMajorComplexMatrix> g(full_state.data(), u.rows(), fock_dim);
  ComplexVector out(static_cast<Eigen::Index>(levels) * fock_dim);
  Eigen::Map<RowMajorComplexMatrix> c(out.data(), levels, fock_dim);
  c.noalias() = u.transpose().cast<cplx>() * g;
  return out;
}

double ground_state_fidelity(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("state lengths differ");
  const double na = a.norm(), nb = b.norm();
  if (std::abs(na - 1.0) > 1e-6 || std::abs(nb - 1.0) > 1e-6) {
    throw NormError("fidelity needs normalized states (norms " +
                    std::to_string(na) + ", " + std::to_string(nb) + ")");
  }
  return std::norm(a.dot(b));
}

RealVector schmidt_weights(const ComplexVector& state, int atom_dim,
                           int fock_dim) {
  if (state.size() != static_cast<Eigen::Index>(atom_dim) * fock_dim) {
    throw DimensionError("state length does not match the bipartition");
  }
  const ComplexMatrix m =
      Eigen::Map<const RowMajorComplexMatrix>(state.data(), atom_dim, fock_dim);
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().array().square();
}

ComplexMatrix reduced_density_matrix(const ComplexVector& state, int atom_dim,
                                     int fock_dim, Subsystem keep) {
  if (state.size() != static_cast<Eigen::Index>(atom_dim) * fock_dim) {
    throw DimensionError("state length does not match the bipartition");
  }
  Eigen::Map<const RowMajorComplexMatrix> m(state.data(), atom_dim, fock_dim);
  if (keep == Subsystem::atom) return m * m.adjoint();
  return (m.adjoint() * m).transpose();
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : solver.eigenvalues()) {
    if (p > 1e-24) s -= p * std::log(p);
  }
  return s;
}

double entanglement_entropy(const ComplexVector& state, int atom_dim,
                            int fock_dim) {
  const RealVector w = schmidt_weights(state, atom_dim, fock_dim);
  double s = 0.0;
  for (double p : w) {
    if (p > 1e-24) s -= p * std::log(p);
  }
  return s;
}

}  // namespace optgauge
