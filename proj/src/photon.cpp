#include "optgauge/photon.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace optgauge {

FockSpace::FockSpace(std::vector<int> cutoffs, std::size_t max_dimension)
    : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw DimensionError("Fock space needs at least one mode");
  std::size_t dim = 1;
  for (int c : cutoffs_) {
    if (c < 1) throw DimensionError("photon cutoffs must be >= 1");
    dim *= static_cast<std::size_t>(c + 1);
    if (dim > max_dimension) {
      throw CapacityError("Fock dimension exceeds budget of " +
                          std::to_string(max_dimension));
    }
  }
  dimension_ = static_cast<int>(dim);
  strides_.assign(cutoffs_.size(), 1);
  for (int k = modes() - 2; k >= 0; --k) {
    strides_[k] = strides_[k + 1] * (cutoffs_[k + 1] + 1);
  }
}

int FockSpace::index(std::span<const int> occupations) const {
  if (static_cast<int>(occupations.size()) != modes()) {
    throw DimensionError("occupation tuple has wrong length");
  }
  int flat = 0;
  for (int k = 0; k < modes(); ++k) {
    if (occupations[k] < 0 || occupations[k] > cutoffs_[k]) {
      throw DimensionError("occupation outside cutoff");
    }
    flat += occupations[k] * strides_[k];
  }
  return flat;
}

std::vector<int> FockSpace::occupations(int index) const {
  if (index < 0 || index >= dimension_) throw DimensionError("Fock index out of range");
  std::vector<int> n(cutoffs_.size());
  for (int k = 0; k < modes(); ++k) {
    n[k] = index / strides_[k];
    index %= strides_[k];
  }
  return n;
}

FockSpace build_fock_space(std::vector<int> cutoffs, std::size_t max_dimension) {
  return FockSpace(std::move(cutoffs), max_dimension);
}

SparseMatrix mode_operator(const FockSpace& space, int k, ModeOperatorKind kind) {
  if (k < 0 || k >= space.modes()) throw DimensionError("mode index out of range");
  const int dim = space.dimension();
  const int stride = space.stride(k);
  const int cutoff = space.cutoffs()[k];

  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(static_cast<std::size_t>(2 * dim));
  for (int col = 0; col < dim; ++col) {
    const int n = (col / stride) % (cutoff + 1);
    // Column `col` has occupation n; <n-1|b|n> = sqrt(n) sits at (col - stride, col).
    const bool can_lower = n > 0;
    const bool can_raise = n < cutoff;
    const double down = std::sqrt(static_cast<double>(n));
    const double up = std::sqrt(static_cast<double>(n + 1));
    switch (kind) {
      case ModeOperatorKind::annihilate:
        if (can_lower) entries.emplace_back(col - stride, col, down);
        break;
      case ModeOperatorKind::create:
        if (can_raise) entries.emplace_back(col + stride, col, up);
        break;
      case ModeOperatorKind::position:
        if (can_lower) entries.emplace_back(col - stride, col, down);
        if (can_raise) entries.emplace_back(col + stride, col, up);
        break;
      case ModeOperatorKind::momentum:
        // i (b^dagger - b)
        if (can_lower) entries.emplace_back(col - stride, col, -kI * down);
        if (can_raise) entries.emplace_back(col + stride, col, kI * up);
        break;
      case ModeOperatorKind::number:
        if (n > 0) entries.emplace_back(col, col, static_cast<double>(n));
        break;
    }
  }
  SparseMatrix op(dim, dim);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseMatrix photonic_hamiltonian(const FockSpace& space,
                                  std::span<const ModeSpec> modes,
                                  const GaugeVector& gauge) {
  if (static_cast<int>(modes.size()) != space.modes() ||
      gauge.size() != modes.size()) {
    throw DimensionError("mode, gauge and Fock space sizes disagree");
  }
  const int dim = space.dimension();
  SparseMatrix quadrature(dim, dim);
  SparseMatrix h(dim, dim);
  for (int k = 0; k < space.modes(); ++k) {
    const double c = (1.0 - gauge[k]) * modes[k].amplitude;
    if (c != 0.0) {
      quadrature += c * mode_operator(space, k, ModeOperatorKind::position);
    }
    h += modes[k].omega * mode_operator(space, k, ModeOperatorKind::number);
  }
  SparseMatrix squared = quadrature * quadrature;
  h += 0.5 * squared;
  h.prune(cplx(0.0));
  return h;
}

double BogoliubovResult::symplectic_residual() const {
  const int n = static_cast<int>(symplectic.rows()) / 2;
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = RealMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
  return (symplectic * j * symplectic.transpose() - j).cwiseAbs().maxCoeff();
}

BogoliubovResult bogoliubov_diagonalize(std::span<const ModeSpec> modes,
                                        const GaugeVector& gauge) {
  const int K = static_cast<int>(modes.size());
  if (K == 0) throw DimensionError("Bogoliubov transformation needs a mode");
  if (gauge.size() != modes.size()) {
    throw DimensionError("gauge and mode counts disagree");
  }
  RealVector omega(K), coupling(K);
  for (int k = 0; k < K; ++k) {
    if (!(modes[k].omega > 0.0)) throw InstabilityError("mode frequency must be positive");
    omega(k) = modes[k].omega;
    coupling(k) = (1.0 - gauge[k]) * modes[k].amplitude;
  }
  // (b+b^dagger) = sqrt2 q, so [sum c_k (b_k+b_k^dagger)]^2 / 2 = q^T (c c^T) q.
  const RealMatrix kq =
      RealMatrix(omega.asDiagonal()) + 2.0 * coupling * coupling.transpose();
  const RealVector root = omega.cwiseSqrt();
  const RealMatrix m = root.asDiagonal() * kq * root.asDiagonal();

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw InstabilityError("eigensolver failed");
  const RealVector w2 = solver.eigenvalues();
  if (w2.minCoeff() <= 0.0) {
    throw InstabilityError("photonic quadratic form is not positive definite");
  }
  const RealMatrix& o = solver.eigenvectors();

  BogoliubovResult out;
  out.frequencies = w2.cwiseSqrt();
  const RealVector fw = out.frequencies.cwiseSqrt();
  out.symplectic = RealMatrix::Zero(2 * K, 2 * K);
  out.symplectic.topLeftCorner(K, K) =
      root.asDiagonal() * o * fw.cwiseInverse().asDiagonal();
  out.symplectic.bottomRightCorner(K, K) =
      root.cwiseInverse().asDiagonal() * o * fw.asDiagonal();
  out.vacuum_energy = 0.5 * (out.frequencies.sum() - omega.sum());
  return out;
}

}  // namespace optgauge
