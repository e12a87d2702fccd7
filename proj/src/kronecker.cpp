#include "optgauge/kronecker.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace optgauge {

namespace {

template <class Sparse>
double max_abs_sparse(const Sparse& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (typename Sparse::InnerIterator it(m, k); it; ++it) {
      best = std::max(best, std::abs(it.value()));
    }
  }
  return best;
}

template <class Sparse>
double antihermitian_part(const Sparse& m) {
  Sparse diff = m - Sparse(m.adjoint());
  return max_abs_sparse(diff);
}

}  // namespace

template <class Scalar>
void BasicKroneckerSum<Scalar>::check_term(const Term& term) const {
  switch (term.atom_kind) {
    case Term::AtomKind::dense:
      if (term.atom.rows() != atom_dim_ || term.atom.cols() != atom_dim_) {
        throw DimensionError("atomic factor has the wrong shape");
      }
      break;
    case Term::AtomKind::diagonal:
      if (term.atom_diag.size() != atom_dim_) {
        throw DimensionError("diagonal atomic factor has the wrong length");
      }
      break;
    case Term::AtomKind::identity:
      break;
  }
  if (!term.photon_identity &&
      (term.photon.rows() != photon_dim_ || term.photon.cols() != photon_dim_)) {
    throw DimensionError("photonic factor has the wrong shape");
  }
}

template <class Scalar>
void BasicKroneckerSum<Scalar>::add_dense(Matrix atom, Sparse photon) {
  Term t;
  t.atom_kind = Term::AtomKind::dense;
  t.atom = std::move(atom);
  t.photon = std::move(photon);
  check_term(t);
  terms_.push_back(std::move(t));
}

template <class Scalar>
void BasicKroneckerSum<Scalar>::add_diagonal(Vector atom_diag, Sparse photon) {
  Term t;
  t.atom_kind = Term::AtomKind::diagonal;
  t.atom_diag = std::move(atom_diag);
  t.photon = std::move(photon);
  check_term(t);
  terms_.push_back(std::move(t));
}

template <class Scalar>
void BasicKroneckerSum<Scalar>::add_atom_only(Matrix atom) {
  Term t;
  t.atom_kind = Term::AtomKind::dense;
  t.atom = std::move(atom);
  t.photon_identity = true;
  check_term(t);
  terms_.push_back(std::move(t));
}

template <class Scalar>
void BasicKroneckerSum<Scalar>::add_photon_only(Sparse photon) {
  Term t;
  t.atom_kind = Term::AtomKind::identity;
  t.photon = std::move(photon);
  check_term(t);
  terms_.push_back(std::move(t));
}

template <class Scalar>
void BasicKroneckerSum<Scalar>::apply(const Vector& in, Vector& out) const {
  using RowMajor =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (in.size() != dimension()) throw DimensionError("vector length mismatch");
  out.setZero(dimension());
  Eigen::Map<const RowMajor> v(in.data(), atom_dim_, photon_dim_);
  Eigen::Map<RowMajor> w(out.data(), atom_dim_, photon_dim_);
  RowMajor scratch(atom_dim_, photon_dim_);

  for (const auto& t : terms_) {
    // (A (x) B) vec(V) = vec(A V B^T) for row-major vec.
    const bool photon_id = t.photon_identity;
    switch (t.atom_kind) {
      case Term::AtomKind::identity:
        if (photon_id) {
          w += v;
        } else {
          w += v * t.photon.transpose();
        }
        break;
      case Term::AtomKind::diagonal:
        if (photon_id) {
          w += t.atom_diag.asDiagonal() * v;
        } else {
          scratch.noalias() = v * t.photon.transpose();
          w += t.atom_diag.asDiagonal() * scratch;
        }
        break;
      case Term::AtomKind::dense:
        if (photon_id) {
          w.noalias() += t.atom * v;
        } else {
          scratch.noalias() = v * t.photon.transpose();
          w.noalias() += t.atom * scratch;
        }
        break;
    }
  }
}

template <class Scalar>
void BasicKroneckerSum<Scalar>::apply(const Matrix& in, Matrix& out) const {
  out.resize(in.rows(), in.cols());
  Vector col_in, col_out;
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    col_in = in.col(c);
    apply(col_in, col_out);
    out.col(c) = col_out;
  }
}

template <class Scalar>
double BasicKroneckerSum<Scalar>::hermiticity_residual() const {
  double total = 0.0;
  for (const auto& t : terms_) {
    double a_norm = 1.0, a_anti = 0.0;
    switch (t.atom_kind) {
      case Term::AtomKind::identity:
        break;
      case Term::AtomKind::diagonal:
        a_norm = t.atom_diag.cwiseAbs().maxCoeff();
        a_anti = t.atom_diag.imag().cwiseAbs().maxCoeff();
        break;
      case Term::AtomKind::dense:
        a_norm = t.atom.cwiseAbs().maxCoeff();
        a_anti = (t.atom - t.atom.adjoint()).cwiseAbs().maxCoeff();
        break;
    }
    const double b_norm = t.photon_identity ? 1.0 : max_abs_sparse(t.photon);
    const double b_anti = t.photon_identity ? 0.0 : antihermitian_part(t.photon);
    total += a_anti * b_norm + a_norm * b_anti;
  }
  return total;
}

template <class Scalar>
double BasicKroneckerSum<Scalar>::max_abs() const {
  double total = 0.0;
  for (const auto& t : terms_) {
    double a = 1.0;
    if (t.atom_kind == Term::AtomKind::dense) a = t.atom.cwiseAbs().maxCoeff();
    if (t.atom_kind == Term::AtomKind::diagonal) {
      a = t.atom_diag.cwiseAbs().maxCoeff();
    }
    const double b = t.photon_identity ? 1.0 : max_abs_sparse(t.photon);
    total += a * b;
  }
  return total;
}

template <class Scalar>
typename BasicKroneckerSum<Scalar>::Sparse BasicKroneckerSum<Scalar>::to_sparse() const {
  std::vector<Eigen::Triplet<Scalar>> entries;
  const int F = photon_dim_;
  auto emit = [&](int i, int j, Scalar a, const Term& t) {
    if (a == Scalar(0.0)) return;
    if (t.photon_identity) {
      for (int n = 0; n < F; ++n) entries.emplace_back(i * F + n, j * F + n, a);
      return;
    }
    for (int r = 0; r < t.photon.outerSize(); ++r) {
      for (typename Sparse::InnerIterator it(t.photon, r); it; ++it) {
        entries.emplace_back(i * F + static_cast<int>(it.row()),
                             j * F + static_cast<int>(it.col()), a * it.value());
      }
    }
  };
  for (const auto& t : terms_) {
    switch (t.atom_kind) {
      case Term::AtomKind::identity:
        for (int i = 0; i < atom_dim_; ++i) emit(i, i, Scalar(1.0), t);
        break;
      case Term::AtomKind::diagonal:
        for (int i = 0; i < atom_dim_; ++i) emit(i, i, t.atom_diag(i), t);
        break;
      case Term::AtomKind::dense:
        for (int i = 0; i < atom_dim_; ++i) {
          for (int j = 0; j < atom_dim_; ++j) emit(i, j, t.atom(i, j), t);
        }
        break;
    }
  }
  Sparse h(dimension(), dimension());
  h.setFromTriplets(entries.begin(), entries.end());
  h.prune(Scalar(0.0));
  return h;
}

template <class Scalar>
typename BasicKroneckerSum<Scalar>::Matrix BasicKroneckerSum<Scalar>::to_dense() const {
  return Matrix(to_sparse());
}

template <class Scalar>
void BasicKroneckerSum<Scalar>::write_coordinates(std::ostream& out) const {
  const Sparse h = to_sparse();
  out << "# dimension " << h.rows() << " nonzeros " << h.nonZeros() << '\n';
  out << "# row col re im\n";
  out << std::setprecision(17);
  for (int r = 0; r < h.outerSize(); ++r) {
    for (typename Sparse::InnerIterator it(h, r); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << std::real(it.value()) << ' '
          << std::imag(it.value()) << '\n';
    }
  }
}

template class BasicKroneckerSum<cplx>;
template class BasicKroneckerSum<double>;

namespace {

enum class Phase { zero, real, imaginary, mixed };

Phase classify(double max_re, double max_im) {
  const double scale = std::max(max_re, max_im);
  if (scale == 0.0) return Phase::zero;
  if (max_im <= 1e-14 * scale) return Phase::real;
  if (max_re <= 1e-14 * scale) return Phase::imaginary;
  return Phase::mixed;
}

template <class Derived>
Phase classify_dense(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return Phase::zero;
  return classify(m.real().cwiseAbs().maxCoeff(), m.imag().cwiseAbs().maxCoeff());
}

Phase classify_sparse(const SparseMatrix& m) {
  double re = 0.0, im = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      re = std::max(re, std::abs(it.value().real()));
      im = std::max(im, std::abs(it.value().imag()));
    }
  }
  return classify(re, im);
}

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return kI;
    case 2: return -1.0;
    default: return -kI;
  }
}

}  // namespace

std::optional<RealKroneckerSum> real_form(const KroneckerSum& op) {
  const auto& occ = op.photon_occupation();
  if (static_cast<int>(occ.size()) != op.photon_dim()) return std::nullopt;

  RealKroneckerSum out(op.atom_dim(), op.photon_dim());
  out.set_photon_occupation(occ);
  for (const auto& t : op.terms()) {
    SparseMatrix b;
    Phase pb = Phase::real;
    if (!t.photon_identity) {
      b = t.photon;
      for (int r = 0; r < b.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(b, r); it; ++it) {
          it.valueRef() *= i_power(occ[it.row()] - occ[it.col()]);
        }
      }
      pb = classify_sparse(b);
    }
    Phase pa = Phase::real;
    if (t.atom_kind == KroneckerTerm::AtomKind::dense) pa = classify_dense(t.atom);
    if (t.atom_kind == KroneckerTerm::AtomKind::diagonal) {
      pa = classify_dense(t.atom_diag);
    }
    if (pa == Phase::zero || pb == Phase::zero) continue;
    if (pa == Phase::mixed || pb == Phase::mixed || pa != pb) return std::nullopt;

    // (i a) (x) (i b) = -(a (x) b)
    const bool imag = pa == Phase::imaginary;
    const double sign = imag ? -1.0 : 1.0;
    RealKroneckerSum::Sparse rb;
    if (!t.photon_identity) {
      rb = imag ? RealKroneckerSum::Sparse(sign * b.imag()) : RealKroneckerSum::Sparse(b.real());
    }
    switch (t.atom_kind) {
      case KroneckerTerm::AtomKind::identity:
        out.add_photon_only(std::move(rb));
        break;
      case KroneckerTerm::AtomKind::diagonal: {
        RealVector d = imag ? RealVector(t.atom_diag.imag()) : RealVector(t.atom_diag.real());
        if (t.photon_identity) {
          RealMatrix a = RealMatrix(d.asDiagonal()) * sign;
          out.add_atom_only(std::move(a));
        } else {
          out.add_diagonal(std::move(d), std::move(rb));
        }
        break;
      }
      case KroneckerTerm::AtomKind::dense: {
        RealMatrix a = imag ? RealMatrix(t.atom.imag()) : RealMatrix(t.atom.real());
        if (t.photon_identity) {
          out.add_atom_only(std::move(a));
        } else {
          out.add_dense(std::move(a), std::move(rb));
        }
        break;
      }
    }
  }
  return out;
}

ComplexVector from_real_frame(const RealVector& v, const KroneckerSum& op) {
  if (v.size() != op.dimension()) throw DimensionError("vector length mismatch");
  const auto& occ = op.photon_occupation();
  if (static_cast<int>(occ.size()) != op.photon_dim()) {
    throw DimensionError("photon occupations unknown");
  }
  ComplexVector out(v.size());
  const int F = op.photon_dim();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = i_power(-occ[i % F]) * v(i);
  }
  return out;
}

}  // namespace optgauge
