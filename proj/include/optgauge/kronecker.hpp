#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "optgauge/common.hpp"

namespace optgauge {

/// One term A (x) B of a bipartite operator, atomic factor first. Identity
/// and diagonal atomic factors are stored compactly; `photon_identity`
/// replaces the photonic factor by the identity.
template <class Scalar>
struct BasicKroneckerTerm {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Sparse = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;
  enum class AtomKind { identity, diagonal, dense };

  AtomKind atom_kind = AtomKind::dense;
  Matrix atom;          // atom_kind == dense
  Vector atom_diag;     // atom_kind == diagonal
  Sparse photon;        // ignored when photon_identity
  bool photon_identity = false;
};

/// H = sum_t A_t (x) B_t acting on vectors indexed as atom * F + photon.
/// Applied matrix-free: with the state reshaped to an (atom x photon)
/// row-major matrix V, H V = sum_t A_t V B_t^T.
template <class Scalar>
class BasicKroneckerSum {
 public:
  using Term = BasicKroneckerTerm<Scalar>;
  using Matrix = typename Term::Matrix;
  using Vector = typename Term::Vector;
  using Sparse = typename Term::Sparse;

  BasicKroneckerSum() = default;
  BasicKroneckerSum(int atom_dim, int photon_dim)
      : atom_dim_(atom_dim), photon_dim_(photon_dim) {}

  int atom_dim() const { return atom_dim_; }
  int photon_dim() const { return photon_dim_; }
  int dimension() const { return atom_dim_ * photon_dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  void add_dense(Matrix atom, Sparse photon);
  void add_diagonal(Vector atom_diag, Sparse photon);
  /// atom (x) identity
  void add_atom_only(Matrix atom);
  /// identity (x) photon
  void add_photon_only(Sparse photon);

  /// Total photon number of each photonic basis state, if known. Used to
  /// find a real form of the operator (see real_form).
  void set_photon_occupation(std::vector<int> total) {
    photon_occupation_ = std::move(total);
  }
  const std::vector<int>& photon_occupation() const { return photon_occupation_; }

  /// out = H in (overwrites out).
  void apply(const Vector& in, Vector& out) const;
  /// Column-wise apply to a block of vectors.
  void apply(const Matrix& in, Matrix& out) const;

  /// Upper bound on max|H - H^dagger| from the factors.
  double hermiticity_residual() const;
  /// Upper bound on max|H_ij|.
  double max_abs() const;

  Sparse to_sparse() const;
  Matrix to_dense() const;

  /// Coordinate list "row col re im" for every stored nonzero, one per line.
  void write_coordinates(std::ostream& out) const;

 private:
  void check_term(const Term& term) const;

  int atom_dim_ = 0;
  int photon_dim_ = 0;
  std::vector<Term> terms_;
  std::vector<int> photon_occupation_;
};

using KroneckerTerm = BasicKroneckerTerm<cplx>;
using KroneckerSum = BasicKroneckerSum<cplx>;
using RealKroneckerSum = BasicKroneckerSum<double>;

extern template class BasicKroneckerSum<cplx>;
extern template class BasicKroneckerSum<double>;

/// With U = exp(i pi N / 2) acting on the photons, U b U^dagger = -i b, so
/// b + b^dagger -> i(b^dagger - b) and i(b^dagger - b) -> -(b + b^dagger).
/// Cavity Hamiltonians whose terms pair real atomic factors with real
/// quadratures (and imaginary with imaginary) become real symmetric in that
/// frame. Returns U H U^dagger as a real operator, or nothing if some term
/// stays complex or the photon occupations are unknown.
std::optional<RealKroneckerSum> real_form(const KroneckerSum& op);

/// Maps an eigenvector of real_form(op) back to the original frame.
ComplexVector from_real_frame(const RealVector& v, const KroneckerSum& op);

}  // namespace optgauge
