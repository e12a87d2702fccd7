#include "optgauge/atom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace optgauge {

namespace {

constexpr double kBoundaryDensityLimit = 1e-12;
constexpr double kSignThreshold = 1e-6;

double interpolate(const Tabulated& table, double x) {
  const auto& xs = table.x;
  if (x < xs.front() || x > xs.back()) {
    throw DimensionError("grid point " + std::to_string(x) +
                         " outside tabulated potential range");
  }
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return table.v.back();
  const auto hi = static_cast<std::size_t>(it - xs.begin());
  const auto lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - t) * table.v[lo] + t * table.v[hi];
}

struct Visitor {
  double y;
  double operator()(const DoubleWell& w) const {
    const double y2 = y * y;
    return w.C * y2 * y2 - w.B * y2;
  }
  double operator()(const Harmonic& h) const {
    return 0.5 * h.omega0 * h.omega0 * y * y;
  }
  double operator()(const Tabulated& t) const { return interpolate(t, y); }
};

}  // namespace

const char* to_string(Discretization scheme) {
  switch (scheme) {
    case Discretization::central_difference:
      return "central_difference";
    case Discretization::sinc_dvr:
      return "sinc_dvr";
  }
  return "?";
}

Discretization discretization_from_string(const std::string& name) {
  if (name == "central_difference") return Discretization::central_difference;
  if (name == "sinc_dvr") return Discretization::sinc_dvr;
  throw ConfigError("/numerics/grid/scheme", "unknown scheme '" + name + "'");
}

Grid Grid::centered(double center, double half_width, int n_points,
                    Discretization scheme) {
  return Grid{center - half_width, center + half_width, n_points, scheme};
}

RealVector Grid::points() const {
  RealVector x(n_points);
  for (int j = 0; j < n_points; ++j) x(j) = point(j);
  return x;
}

void Grid::validate() const {
  if (n_points < 16) {
    throw DimensionError("grid needs at least 16 points, got " +
                         std::to_string(n_points));
  }
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw DimensionError("grid spacing must be positive");
  }
}

PotentialSpec PotentialSpec::double_well_from_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("/potential/gamma", "gamma must be finite and positive");
  }
  PotentialSpec spec;
  spec.kind = DoubleWell{std::cbrt(gamma), 1.0};
  return spec;
}

double PotentialSpec::gamma() const {
  if (const auto* w = std::get_if<DoubleWell>(&kind)) {
    return w->B * w->B * w->B / (w->C * w->C);
  }
  return 0.0;
}

double PotentialSpec::length_scale() const {
  if (const auto* w = std::get_if<DoubleWell>(&kind)) {
    return std::sqrt(w->B / (2.0 * w->C));
  }
  if (const auto* h = std::get_if<Harmonic>(&kind)) {
    return 1.0 / std::sqrt(h->omega0);
  }
  const auto& t = std::get<Tabulated>(kind);
  return 0.5 * (t.x.back() - t.x.front());
}

double PotentialSpec::operator()(double x) const {
  return std::visit(Visitor{x - shift}, kind) + tilt * x;
}

RealVector PotentialSpec::sample(const Grid& grid) const {
  RealVector v(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) v(j) = (*this)(grid.point(j));
  return v;
}

void PotentialSpec::validate() const {
  if (const auto* w = std::get_if<DoubleWell>(&kind)) {
    if (!(w->B > 0.0) || !(w->C > 0.0)) {
      throw ConfigError("/potential", "double well needs B > 0 and C > 0");
    }
    if (!std::isfinite(gamma())) {
      throw ConfigError("/potential", "gamma is not finite");
    }
  } else if (const auto* h = std::get_if<Harmonic>(&kind)) {
    if (!(h->omega0 > 0.0)) {
      throw ConfigError("/potential/omega0", "must be positive");
    }
  } else {
    const auto& t = std::get<Tabulated>(kind);
    if (t.x.size() < 2 || t.x.size() != t.v.size()) {
      throw ConfigError("/potential", "tabulated potential needs >= 2 rows");
    }
    for (std::size_t i = 1; i < t.x.size(); ++i) {
      if (!(t.x[i] > t.x[i - 1])) {
        throw ConfigError("/potential", "tabulated x must be increasing");
      }
    }
  }
  if (!std::isfinite(shift) || !std::isfinite(tilt)) {
    throw ConfigError("/potential", "shift and tilt must be finite");
  }
}

Tabulated load_tabulated_potential(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/potential/file", "cannot open " + path.string());
  Tabulated table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double x = 0.0, v = 0.0;
    if (!(fields >> x)) continue;
    if (!(fields >> v)) {
      throw ConfigError("/potential/file", path.string() + ":" +
                                               std::to_string(line_no) +
                                               ": expected two columns");
    }
    table.x.push_back(x);
    table.v.push_back(v);
  }
  PotentialSpec probe;
  probe.kind = table;
  probe.validate();
  return table;
}

Grid default_grid(const PotentialSpec& spec) {
  if (std::holds_alternative<DoubleWell>(spec.kind)) {
    return Grid::centered(spec.shift, 3.2 * spec.length_scale(), 48);
  }
  if (std::holds_alternative<Harmonic>(spec.kind)) {
    return Grid::centered(spec.shift, 8.0 * spec.length_scale(), 64);
  }
  const auto& t = std::get<Tabulated>(spec.kind);
  return Grid{t.x.front() + spec.shift, t.x.back() + spec.shift, 64,
              Discretization::sinc_dvr};
}

RealMatrix kinetic_matrix(const Grid& grid) {
  grid.validate();
  const int n = grid.n_points;
  const double dx = grid.dx();
  RealMatrix t = RealMatrix::Zero(n, n);
  if (grid.scheme == Discretization::central_difference) {
    for (int j = 0; j < n; ++j) {
      t(j, j) = 1.0 / (dx * dx);
      if (j + 1 < n) t(j, j + 1) = t(j + 1, j) = -0.5 / (dx * dx);
    }
    return t;
  }
  const double diag = std::numbers::pi * std::numbers::pi / (6.0 * dx * dx);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        t(i, j) = diag;
      } else {
        const int d = i - j;
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        t(i, j) = sign / (dx * dx * d * d);
      }
    }
  }
  return t;
}

ComplexMatrix momentum_matrix(const Grid& grid) {
  grid.validate();
  const int n = grid.n_points;
  const double dx = grid.dx();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  if (grid.scheme == Discretization::central_difference) {
    for (int j = 0; j + 1 < n; ++j) {
      p(j, j + 1) = -kI / (2.0 * dx);
      p(j + 1, j) = kI / (2.0 * dx);
    }
    return p;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int d = i - j;
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      p(i, j) = -kI * sign / (d * dx);
    }
  }
  return p;
}

RealVector build_effective_potential(const PotentialSpec& spec,
                                     std::span<const ModeSpec> modes,
                                     const GaugeVector& gauge,
                                     const Grid& grid) {
  if (gauge.size() != modes.size()) {
    throw DimensionError("gauge has " + std::to_string(gauge.size()) +
                         " components for " + std::to_string(modes.size()) +
                         " modes");
  }
  grid.validate();
  double curvature = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    curvature += gauge[k] * gauge[k] * modes[k].omega * modes[k].amplitude *
                 modes[k].amplitude;
  }
  RealVector v = spec.sample(grid);
  for (int j = 0; j < grid.n_points; ++j) {
    const double x = grid.point(j);
    v(j) += curvature * x * x;
  }
  return v;
}

AtomBasis solve_atom(const RealVector& potential, const Grid& grid,
                     int n_levels) {
  grid.validate();
  const int n = grid.n_points;
  if (potential.size() != n) {
    throw DimensionError("potential length does not match the grid");
  }
  if (n_levels < 1 || n_levels > n / 4) {
    throw DimensionError("n_levels must be in [1, n_points/4], got " +
                         std::to_string(n_levels));
  }
  const double dx = grid.dx();

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
  if (grid.scheme == Discretization::central_difference) {
    RealVector diag = potential.array() + 1.0 / (dx * dx);
    RealVector sub = RealVector::Constant(n - 1, -0.5 / (dx * dx));
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  } else {
    RealMatrix h = kinetic_matrix(grid);
    h.diagonal() += potential;
    solver.compute(h);
  }
  if (solver.info() != Eigen::Success) {
    throw Error("atomic eigensolver failed");
  }

  AtomBasis basis;
  basis.grid = grid;
  basis.energies = solver.eigenvalues().head(n_levels);
  basis.wavefunctions = solver.eigenvectors().leftCols(n_levels) / std::sqrt(dx);

  for (int i = 0; i < n_levels; ++i) {
    auto psi = basis.wavefunctions.col(i);
    for (int j = 0; j < n; ++j) {
      if (std::abs(psi(j)) > kSignThreshold) {
        if (psi(j) < 0.0) psi *= -1.0;
        break;
      }
    }
    const double edge = std::max(psi(0) * psi(0), psi(n - 1) * psi(n - 1));
    if (edge >= kBoundaryDensityLimit) throw DomainTooSmallError(i, edge);
  }
  return basis;
}

AtomBasis solve_atom_adaptive(const PotentialSpec& spec,
                              std::span<const ModeSpec> modes,
                              const GaugeVector& gauge, Grid grid,
                              int n_levels, int max_widenings) {
  for (int attempt = 0;; ++attempt) {
    try {
      AtomBasis basis = solve_atom(
          build_effective_potential(spec, modes, gauge, grid), grid, n_levels);
      for (std::size_t k = 0; k < modes.size(); ++k) {
        basis.renormalization_weights.push_back(
            gauge[k] * gauge[k] * modes[k].omega * modes[k].amplitude *
            modes[k].amplitude);
      }
      return basis;
    } catch (const DomainTooSmallError&) {
      if (attempt >= max_widenings) throw;
      const double dx = grid.dx();
      const int extra = std::max(2, (grid.n_points - 1) / 8);
      grid = Grid::centered(grid.center(), grid.half_width() + extra * dx,
                            grid.n_points + 2 * extra, grid.scheme);
    }
  }
}

MatrixElements matrix_elements(const AtomBasis& basis, int M) {
  if (M < 1 || M > basis.n_levels()) {
    throw DimensionError("requested " + std::to_string(M) +
                         " levels from a basis of " +
                         std::to_string(basis.n_levels()));
  }
  const Grid& grid = basis.grid;
  const double dx = grid.dx();
  // Discrete orthonormal vectors u = psi sqrt(dx).
  const RealMatrix u = basis.wavefunctions.leftCols(M) * std::sqrt(dx);
  const RealVector x = grid.points();
  const RealVector x2 = x.array().square();

  MatrixElements me;
  me.x = (u.transpose() * x.asDiagonal() * u).cast<cplx>();
  me.xsq = (u.transpose() * x2.asDiagonal() * u).cast<cplx>();
  const ComplexMatrix uc = u.cast<cplx>();
  me.p = uc.adjoint() * momentum_matrix(grid) * uc;
  return me;
}

double calibrate_vacuum_amplitude(const AtomBasis& basis, double g_target) {
  if (basis.n_levels() < 2) {
    throw DimensionError("calibration needs at least two levels");
  }
  const MatrixElements me = matrix_elements(basis, 2);
  const double p01 = std::abs(me.p(0, 1));
  if (!(p01 > 1e-14)) {
    throw DegenerateTransitionError("<eps_0|p|eps_1> vanishes; cannot calibrate g");
  }
  return g_target / p01;
}

void write_atom_csv(std::ostream& out, const AtomBasis& basis, int M) {
  const MatrixElements me = matrix_elements(basis, M);
  const double delta = basis.transition();
  out << std::setprecision(17);
  out << "# levels=" << basis.n_levels() << " n_points=" << basis.grid.n_points
      << " x_min=" << basis.grid.x_min << " x_max=" << basis.grid.x_max
      << " scheme=" << to_string(basis.grid.scheme) << '\n';
  out << "# delta=" << delta;
  if (basis.n_levels() >= 3) out << " anharmonicity=" << basis.anharmonicity();
  out << '\n';
  out << "level,energy,energy_in_delta\n";
  for (int i = 0; i < basis.n_levels(); ++i) {
    out << i << ',' << basis.energies(i) << ','
        << (basis.energies(i) - basis.energies(0)) / delta << '\n';
  }
  out << "\nrow,col,x_re,x_im,p_re,p_im,xsq_re,xsq_im\n";
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      out << i << ',' << j << ',' << me.x(i, j).real() << ','
          << me.x(i, j).imag() << ',' << me.p(i, j).real() << ','
          << me.p(i, j).imag() << ',' << me.xsq(i, j).real() << ','
          << me.xsq(i, j).imag() << '\n';
    }
  }
}

}  // namespace optgauge
