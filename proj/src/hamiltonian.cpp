#include "optgauge/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace optgauge {

namespace {

constexpr double kHermiticityTolerance = 1e-12;

void check_sizes(std::span<const ModeSpec> modes, const GaugeVector& gauge,
                 const FockSpace& fock) {
  if (gauge.size() != modes.size() ||
      static_cast<int>(modes.size()) != fock.modes()) {
    throw DimensionError("mode, gauge and Fock space sizes disagree");
  }
}

std::vector<int> total_occupations(const FockSpace& fock) {
  std::vector<int> total(fock.dimension());
  for (int i = 0; i < fock.dimension(); ++i) {
    const auto n = fock.occupations(i);
    total[i] = std::accumulate(n.begin(), n.end(), 0);
  }
  return total;
}

}  // namespace

PhotonicFactors photonic_factors(const FockSpace& fock,
                                 std::span<const ModeSpec> modes,
                                 const GaugeVector& gauge) {
  check_sizes(modes, gauge, fock);
  const int dim = fock.dimension();
  PhotonicFactors f{SparseMatrix(dim, dim), SparseMatrix(dim, dim),
                    photonic_hamiltonian(fock, modes, gauge)};
  for (int k = 0; k < fock.modes(); ++k) {
    const double a = modes[k].amplitude;
    const double c = (1.0 - gauge[k]) * a;
    const double d = gauge[k] * modes[k].omega * a;
    if (c != 0.0) f.coulomb += c * mode_operator(fock, k, ModeOperatorKind::position);
    if (d != 0.0) f.dipole -= d * mode_operator(fock, k, ModeOperatorKind::momentum);
  }
  return f;
}

FullHamiltonian assemble_full(const Grid& grid, const PotentialSpec& potential,
                              std::span<const ModeSpec> modes,
                              const GaugeVector& gauge, const FockSpace& fock) {
  check_sizes(modes, gauge, fock);
  FullHamiltonian h;
  h.grid = grid;
  h.potential = potential;
  h.modes.assign(modes.begin(), modes.end());
  h.gauge = gauge;
  h.fock = fock;
  h.op = KroneckerSum(grid.n_points, fock.dimension());
  h.op.set_photon_occupation(total_occupations(fock));

  ComplexMatrix atomic = kinetic_matrix(grid).cast<cplx>();
  atomic.diagonal() +=
      build_effective_potential(potential, modes, gauge, grid).cast<cplx>();
  h.op.add_atom_only(std::move(atomic));

  PhotonicFactors f = photonic_factors(fock, modes, gauge);
  if (f.coulomb.nonZeros() > 0) {
    h.op.add_dense(momentum_matrix(grid), std::move(f.coulomb));
  }
  if (f.dipole.nonZeros() > 0) {
    h.op.add_diagonal(grid.points().cast<cplx>(), std::move(f.dipole));
  }
  h.op.add_photon_only(std::move(f.free));

  const double residual = h.op.hermiticity_residual();
  if (residual > kHermiticityTolerance * std::max(1.0, h.op.max_abs())) {
    throw HermiticityError("assembled Hamiltonian is not Hermitian (residual " +
                           std::to_string(residual) + ")");
  }
  return h;
}

const char* to_string(BasisKind kind) {
  return kind == BasisKind::bare ? "bare" : "renormalized";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "bare") return BasisKind::bare;
  if (name == "renormalized") return BasisKind::renormalized;
  throw ConfigError("/truncation/basis", "unknown basis kind '" + name + "'");
}

TruncatedModel build_truncated_model(BasisKind kind, int levels,
                                     std::span<const ModeSpec> modes,
                                     const GaugeVector& gauge, const Grid& grid,
                                     const PotentialSpec& potential) {
  if (levels < 2) throw DimensionError("truncated model needs at least 2 levels");
  if (gauge.size() != modes.size()) {
    throw DimensionError("gauge and mode counts disagree");
  }
  TruncatedModel model;
  model.levels = levels;
  model.basis_kind = kind;
  model.modes.assign(modes.begin(), modes.end());
  model.gauge = gauge;

  const GaugeVector basis_gauge =
      kind == BasisKind::bare ? GaugeVector::coulomb(modes.size()) : gauge;
  model.basis = solve_atom_adaptive(potential, modes, basis_gauge, grid, levels);
  model.elements = matrix_elements(model.basis, levels);

  const auto& e = model.basis.energies;
  model.splitting = e(1) - e(0);
  model.near_degenerate =
      model.splitting < 1e-8 * std::max(1.0, std::abs(e(0)));

  const cplx p01 = model.elements.p(0, 1);
  const double x01 = model.elements.x(0, 1).real();
  const double xsq_gap =
      model.elements.xsq(1, 1).real() - model.elements.xsq(0, 0).real();
  for (const auto& mode : modes) {
    model.g_coulomb.push_back((kI * mode.amplitude * p01).real());
    model.g_dipole.push_back(mode.omega * mode.amplitude * x01);
    if (kind == BasisKind::bare) {
      model.delta.push_back(0.5 * mode.omega * mode.amplitude * mode.amplitude *
                            xsq_gap);
    }
  }
  return model;
}

ComplexMatrix TruncatedModel::atomic_block() const {
  ComplexMatrix block = ComplexMatrix::Zero(levels, levels);
  block.diagonal() = basis.energies.head(levels).cast<cplx>();
  if (basis_kind == BasisKind::bare) {
    double curvature = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      curvature += gauge[k] * gauge[k] * modes[k].omega * modes[k].amplitude *
                   modes[k].amplitude;
    }
    block += curvature * elements.xsq;
  }
  return block;
}

KroneckerSum assemble_truncated(const TruncatedModel& model,
                                const FockSpace& fock) {
  check_sizes(model.modes, model.gauge, fock);
  KroneckerSum op(model.levels, fock.dimension());
  op.set_photon_occupation(total_occupations(fock));
  op.add_atom_only(model.atomic_block());
  PhotonicFactors f = photonic_factors(fock, model.modes, model.gauge);
  if (f.coulomb.nonZeros() > 0) op.add_dense(model.elements.p, std::move(f.coulomb));
  if (f.dipole.nonZeros() > 0) op.add_dense(model.elements.x, std::move(f.dipole));
  op.add_photon_only(std::move(f.free));
  return op;
}

}  // namespace optgauge
