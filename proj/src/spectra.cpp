#include "optgauge/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include <Eigen/Eigenvalues>

#include "optgauge/hamiltonian.hpp"
#include "optgauge/photon.hpp"

namespace optgauge {

LinearOperator make_operator(const KroneckerSum& op) {
  return LinearOperator{op.dimension(),
                        [&op](const ComplexMatrix& in, ComplexMatrix& out) {
                          op.apply(in, out);
                        }};
}

LinearOperator make_operator(const ComplexMatrix& dense) {
  if (dense.rows() != dense.cols()) throw DimensionError("operator must be square");
  return LinearOperator{static_cast<int>(dense.rows()),
                        [&dense](const ComplexMatrix& in, ComplexMatrix& out) {
                          out.noalias() = dense * in;
                        }};
}

namespace {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Deterministic, low-discrepancy filler vector for start blocks and deflation.
template <class Scalar>
Vec<Scalar> weyl_vector(int n, int seed) {
  const double alpha = std::fmod(0.6180339887498949 * (seed + 1), 1.0);
  const double beta = std::fmod(0.4142135623730951 * (seed + 3), 1.0);
  Vec<Scalar> v(n);
  for (int i = 0; i < n; ++i) {
    const double re = std::fmod((i + 1) * alpha + beta, 1.0) - 0.5;
    if constexpr (std::is_same_v<Scalar, double>) {
      v(i) = re;
    } else {
      const double im = std::fmod((i + 1) * beta + alpha, 1.0) - 0.5;
      v(i) = Scalar(re, 0.25 * im);
    }
  }
  return v;
}

// Orthogonalizes v against the first `cols` columns of basis twice.
template <class Scalar>
void project_out(const Mat<Scalar>& basis, int cols, Vec<Scalar>& v) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Vec<Scalar> c = basis.leftCols(cols).adjoint() * v;
    v.noalias() -= basis.leftCols(cols) * c;
  }
}

// QR of w, which must already be orthogonal to basis[:, 0:cols].
// Dependent columns are replaced by fresh directions with a zero diagonal
// in R.
template <class Scalar>
void block_qr(Mat<Scalar>& w, Mat<Scalar>& r, const Mat<Scalar>& basis, int cols,
              int& fresh_seed) {
  const int b = static_cast<int>(w.cols());
  const int n = static_cast<int>(w.rows());
  r = Mat<Scalar>::Zero(b, b);
  for (int c = 0; c < b; ++c) {
    Vec<Scalar> v = w.col(c);
    const double before = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < c; ++j) {
        const Scalar h = w.col(j).dot(v);
        r(j, c) += h;
        v -= h * w.col(j);
      }
    }
    double nrm = v.norm();
    if (nrm > 1e-10 * before && nrm > 1e-300) {
      r(c, c) = nrm;
      w.col(c) = v / nrm;
      continue;
    }
    // Krylov space exhausted in this direction: continue with a new vector.
    for (int attempt = 0; attempt < 8; ++attempt) {
      v = weyl_vector<Scalar>(n, fresh_seed++);
      project_out(basis, cols, v);
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < c; ++j) v -= w.col(j).dot(v) * w.col(j);
      }
      nrm = v.norm();
      if (nrm > 1e-8) break;
    }
    if (!(nrm > 1e-8)) throw ConvergenceError("could not extend Krylov basis", {});
    r(c, c) = 0.0;
    w.col(c) = v / nrm;
  }
}

template <class Scalar>
struct TypedResult {
  RealVector values;
  Mat<Scalar> vectors;
  RealVector residuals;
  long matvecs = 0;
  int restarts = 0;
};

template <class Scalar>
TypedResult<Scalar> dense_typed(const Mat<Scalar>& h, int k, bool want_vectors) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n) throw DimensionError("matrix must be square");
  if (k < 1 || k > n) throw DimensionError("requested eigenpair count out of range");
  const Mat<Scalar> sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(
      sym, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense eigensolver failed", {});
  }
  TypedResult<Scalar> out;
  out.values = solver.eigenvalues().head(k);
  out.residuals = RealVector::Zero(k);
  if (want_vectors) {
    out.vectors = solver.eigenvectors().leftCols(k);
    for (int i = 0; i < k; ++i) {
      out.residuals(i) =
          (h * out.vectors.col(i) - out.values(i) * out.vectors.col(i)).norm();
    }
  }
  return out;
}

template <class Scalar>
using BlockApply = std::function<void(const Mat<Scalar>&, Mat<Scalar>&)>;

template <class Scalar>
TypedResult<Scalar> block_lanczos(int n, const BlockApply<Scalar>& apply,
                                  const EigenRequest& req) {
  const int k = req.k;
  if (n < 1) throw DimensionError("operator has no dimension");
  if (k < 1 || k > n) throw DimensionError("requested eigenpair count out of range");

  if (req.block_size < 1) throw DimensionError("block size must be >= 1");
  const int b = std::min(n, req.block_size);
  int mmax = req.max_basis > 0 ? req.max_basis : std::max({3 * k, k + 6 * b, 100});
  mmax = std::max(mmax, k + 2 * b);
  mmax += (b - mmax % b) % b;

  const bool use_dense =
      req.method == EigenMethod::dense ||
      (req.method == EigenMethod::automatic && n <= req.dense_threshold) ||
      n <= mmax + b;
  if (use_dense) {
    Mat<Scalar> h(n, n);
    apply(Mat<Scalar>::Identity(n, n), h);
    TypedResult<Scalar> out = dense_typed<Scalar>(h, k, req.want_vectors);
    out.matvecs = n;
    return out;
  }

  Mat<Scalar> v(n, mmax + b);
  Mat<Scalar> h = Mat<Scalar>::Zero(mmax + b, mmax + b);
  TypedResult<Scalar> out;
  int fresh_seed = b;

  {
    Mat<Scalar> start(n, b);
    start.col(0) = Vec<Scalar>::Constant(n, 1.0 / std::sqrt(double(n)));
    for (int c = 1; c < b; ++c) start.col(c) = weyl_vector<Scalar>(n, c);
    Mat<Scalar> r;
    block_qr<Scalar>(start, r, v, 0, fresh_seed);
    v.leftCols(b) = start;
  }

  constexpr int kCheckEvery = 4;  // blocks between Ritz checks
  int m = b;
  int since_check = 0;
  Mat<Scalar> w(n, b), r;
  RealVector last_residuals;
  while (true) {
    // Expand the last block of the basis.
    apply(v.middleCols(m - b, b), w);
    out.matvecs += b;
    Mat<Scalar> c = v.leftCols(m).adjoint() * w;
    w.noalias() -= v.leftCols(m) * c;
    const Mat<Scalar> c2 = v.leftCols(m).adjoint() * w;
    w.noalias() -= v.leftCols(m) * c2;
    c += c2;
    h.block(0, m - b, m, b) = c;
    h.block(m - b, 0, b, m) = c.adjoint();
    const Mat<Scalar> diag = h.block(m - b, m - b, b, b);
    h.block(m - b, m - b, b, b) = 0.5 * (diag + diag.adjoint());
    block_qr<Scalar>(w, r, v, m, fresh_seed);

    const bool must_restart = m + b > mmax;
    ++since_check;
    if (m >= k && (must_restart || since_check >= kCheckEvery)) {
      since_check = 0;
      Eigen::SelfAdjointEigenSolver<Mat<Scalar>> ritz(h.topLeftCorner(m, m));
      const RealVector theta = ritz.eigenvalues();
      const Mat<Scalar>& s = ritz.eigenvectors();
      RealVector res(k);
      bool done = true;
      for (int i = 0; i < k; ++i) {
        res(i) = (r * s.block(m - b, i, b, 1)).norm();
        if (res(i) > req.tol * std::max(1.0, std::abs(theta(i)))) done = false;
      }
      last_residuals = res;
      if (done) {
        out.values = theta.head(k);
        out.residuals = res;
        if (req.want_vectors) {
          out.vectors = v.leftCols(m) * s.leftCols(k);
          for (int i = 0; i < k; ++i) out.vectors.col(i).normalize();
        }
        return out;
      }
      if (must_restart) {
        if (out.matvecs >= req.max_matvecs) {
          std::vector<double> best(res.data(), res.data() + res.size());
          throw ConvergenceError("Lanczos exceeded the matvec budget", best);
        }
        // Thick restart: keep p Ritz vectors, continue from the residual block.
        const int p = std::min(m - b, k + (mmax - k) / 2);
        const Mat<Scalar> keep = v.leftCols(m) * s.leftCols(p);
        v.leftCols(p) = keep;
        v.middleCols(p, b) = w;
        const Mat<Scalar> coupling = r * s.block(m - b, 0, b, p);
        h.setZero();
        h.topLeftCorner(p, p).diagonal() = theta.head(p).template cast<Scalar>();
        h.block(p, 0, b, p) = coupling;
        h.block(0, p, p, b) = coupling.adjoint();
        m = p + b;
        ++out.restarts;
        continue;
      }
    }
    v.middleCols(m, b) = w;
    h.block(m, m - b, b, b) = r;
    h.block(m - b, m, b, b) = r.adjoint();
    m += b;
  }
}

template <class Scalar>
EigenResult to_result(TypedResult<Scalar>&& t) {
  EigenResult out;
  out.values = std::move(t.values);
  out.residuals = std::move(t.residuals);
  out.matvecs = t.matvecs;
  out.restarts = t.restarts;
  if constexpr (std::is_same_v<Scalar, double>) {
    out.vectors = t.vectors.template cast<cplx>();
  } else {
    out.vectors = std::move(t.vectors);
  }
  return out;
}

}  // namespace

EigenResult dense_eigenpairs(const ComplexMatrix& h, int k, bool want_vectors) {
  return to_result(dense_typed<cplx>(h, k, want_vectors));
}

EigenResult lowest_eigenpairs(const LinearOperator& op, const EigenRequest& req) {
  return to_result(block_lanczos<cplx>(op.dimension, op.apply, req));
}

EigenResult lowest_eigenpairs(const KroneckerSum& op, const EigenRequest& req) {
  const bool dense =
      req.method == EigenMethod::dense ||
      (req.method == EigenMethod::automatic && op.dimension() <= req.dense_threshold);
  if (const auto real = real_form(op)) {
    TypedResult<double> t =
        dense ? dense_typed<double>(real->to_dense(), req.k, req.want_vectors)
              : block_lanczos<double>(
                    real->dimension(),
                    [&](const RealMatrix& in, RealMatrix& out) { real->apply(in, out); },
                    req);
    EigenResult out;
    out.values = t.values;
    out.residuals = t.residuals;
    out.matvecs = dense ? 0 : t.matvecs;
    out.restarts = t.restarts;
    if (req.want_vectors) {
      out.vectors.resize(op.dimension(), req.k);
      for (int i = 0; i < req.k; ++i) {
        out.vectors.col(i) = from_real_frame(t.vectors.col(i), op);
      }
    }
    return out;
  }
  if (dense) {
    EigenResult out = dense_eigenpairs(op.to_dense(), req.k, req.want_vectors);
    out.matvecs = 0;
    return out;
  }
  return lowest_eigenpairs(make_operator(op), req);
}

const char* to_string(EscalationStep::Knob knob) {
  switch (knob) {
    case EscalationStep::Knob::initial: return "initial";
    case EscalationStep::Knob::grid: return "grid";
    case EscalationStep::Knob::cutoffs: return "cutoffs";
  }
  return "?";
}

std::string ConvergenceReport::summary(double energy_unit) const {
  std::ostringstream s;
  s << (converged ? "converged" : "NOT converged") << " k=" << k
    << " tol=" << tol / energy_unit;
  s << " grid=" << final_settings.grid.n_points << "@["
    << final_settings.grid.x_min << "," << final_settings.grid.x_max << "]";
  s << " cutoffs=";
  for (std::size_t i = 0; i < final_settings.cutoffs.size(); ++i) {
    s << (i ? "x" : "") << final_settings.cutoffs[i];
  }
  s << " verified_grid=" << verified_settings.grid.n_points << " verified_cutoffs=";
  for (std::size_t i = 0; i < verified_settings.cutoffs.size(); ++i) {
    s << (i ? "x" : "") << verified_settings.cutoffs[i];
  }
  s << " drifts=";
  for (std::size_t i = 1; i < steps.size(); ++i) {
    s << (i > 1 ? "," : "") << to_string(steps[i].knob) << ':'
      << steps[i].drift / energy_unit;
  }
  return s.str();
}

bool ConvergenceReport::drifts_monotone() const {
  for (auto knob : {EscalationStep::Knob::grid, EscalationStep::Knob::cutoffs}) {
    std::vector<double> d;
    for (const auto& step : steps) {
      if (step.knob == knob) d.push_back(step.drift);
    }
    if (d.size() >= 2 && d[d.size() - 1] > d[d.size() - 2]) return false;
  }
  return true;
}

EigenResult solve_exact(const CavitySystem& system, const GaugeVector& gauge,
                        const NumericalSettings& settings, int k, double tol,
                        bool want_vectors) {
  const FockSpace fock(settings.cutoffs);
  const FullHamiltonian full =
      assemble_full(settings.grid, system.potential, system.modes, gauge, fock);
  EigenRequest req;
  req.k = k;
  req.tol = tol / 100.0;
  req.want_vectors = want_vectors;
  return lowest_eigenpairs(full.op, req);
}

namespace {

std::size_t settings_dimension(const NumericalSettings& s) {
  std::size_t dim = static_cast<std::size_t>(s.grid.n_points);
  for (int c : s.cutoffs) dim *= static_cast<std::size_t>(c + 1);
  return dim;
}

NumericalSettings escalate(const NumericalSettings& s, EscalationStep::Knob knob,
                           int cutoff_step) {
  NumericalSettings next = s;
  if (knob == EscalationStep::Knob::grid) {
    next.grid.n_points = 2 * s.grid.n_points - 1;
  } else {
    for (int& c : next.cutoffs) c += cutoff_step;
  }
  return next;
}

}  // namespace

ExactSolution converge(const CavitySystem& system, const GaugeVector& gauge,
                       const NumericalSettings& start,
                       const ConvergenceTargets& targets) {
  using Knob = EscalationStep::Knob;
  if (static_cast<int>(start.cutoffs.size()) != system.mode_count()) {
    throw DimensionError("one cutoff per mode is required");
  }
  ExactSolution sol;
  ConvergenceReport& rep = sol.report;
  rep.tol = targets.tol;
  rep.k = targets.k;

  NumericalSettings current = start;
  sol.spectrum = solve_exact(system, gauge, current, targets.k, targets.tol);
  rep.steps.push_back(EscalationStep{Knob::initial, current,
                                     static_cast<int>(settings_dimension(current)),
                                     sol.spectrum.values, 0.0});
  rep.verified_settings = current;

  bool grid_settled = false, cutoffs_settled = false;
  Knob next = Knob::grid;
  for (int esc = 0; esc < targets.max_escalations; ++esc) {
    if (grid_settled && cutoffs_settled) break;
    Knob knob = next;
    if (knob == Knob::grid && grid_settled) knob = Knob::cutoffs;
    if (knob == Knob::cutoffs && cutoffs_settled) knob = Knob::grid;

    const NumericalSettings candidate = escalate(current, knob, targets.cutoff_step);
    if (settings_dimension(candidate) > targets.max_dimension) break;
    EigenResult trial = solve_exact(system, gauge, candidate, targets.k, targets.tol);
    const double drift = (trial.values - sol.spectrum.values).cwiseAbs().maxCoeff();
    rep.steps.push_back(EscalationStep{knob, candidate,
                                       static_cast<int>(settings_dimension(candidate)),
                                       trial.values, drift});
    if (drift < targets.tol) {
      if (knob == Knob::grid) {
        grid_settled = true;
        rep.verified_settings.grid = current.grid;
      } else {
        cutoffs_settled = true;
        rep.verified_settings.cutoffs = current.cutoffs;
      }
    }
    current = candidate;
    sol.spectrum = std::move(trial);
    next = knob == Knob::grid ? Knob::cutoffs : Knob::grid;
  }
  rep.converged = grid_settled && cutoffs_settled;
  if (!grid_settled) rep.verified_settings.grid = current.grid;
  if (!cutoffs_settled) rep.verified_settings.cutoffs = current.cutoffs;
  rep.final_settings = current;
  return sol;
}

}  // namespace optgauge
