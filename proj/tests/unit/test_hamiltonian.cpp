#include <doctest.h>

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "optgauge/hamiltonian.hpp"
#include "optgauge/spectra.hpp"
#include "optgauge/system.hpp"

using namespace optgauge;

namespace {

const PotentialSpec kWell = PotentialSpec::double_well_from_gamma(64.0);

CavitySystem system_for(std::vector<double> w, double g) {
  return resolve_system(kWell, w, g, default_grid(kWell));
}

RealVector lowest(const KroneckerSum& op, int k) {
  return dense_eigenpairs(op.to_dense(), k, false).values;
}

}  // namespace

TEST_CASE("vacuum amplitude calibration") {
  const CavitySystem s = system_for({1.0, 20.0}, 0.6);
  CHECK(s.delta == doctest::Approx(0.0956919).epsilon(1e-6));
  CHECK(s.coupling == doctest::Approx(0.6 * s.delta));
  CHECK(s.modes[0].amplitude == doctest::Approx(0.6 * s.delta / 0.118579).epsilon(1e-5));
  CHECK(s.modes[1].amplitude == doctest::Approx(s.modes[0].amplitude));
  CHECK(s.modes[1].omega == doctest::Approx(20.0 * s.delta));
}

TEST_CASE("Kronecker sum: matrix-free apply agrees with the assembled matrix") {
  const CavitySystem s = system_for({1.0, 3.0}, 0.8);
  const Grid g = Grid::centered(0.0, 4.5, 20);
  const FullHamiltonian h = assemble_full(g, kWell, s.modes, GaugeVector{0.3, 0.8},
                                          FockSpace({3, 2}));
  const ComplexMatrix d = h.op.to_dense();
  CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * h.op.max_abs());
  CHECK(h.op.hermiticity_residual() < 1e-12 * h.op.max_abs());

  ComplexMatrix block(h.dimension(), 3);
  for (int i = 0; i < block.size(); ++i) block.data()[i] = cplx(std::sin(i), std::cos(3 * i));
  ComplexMatrix out;
  h.op.apply(block, out);
  CHECK((out - d * block).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ComplexMatrix(h.op.to_sparse()) - d).cwiseAbs().maxCoeff() == 0.0);

  std::ostringstream coords;
  h.op.write_coordinates(coords);
  CHECK(!coords.str().empty());
}

TEST_CASE("real frame: same spectrum, eigenvectors map back") {
  const CavitySystem s = system_for({1.0, 2.0}, 1.0);
  const Grid g = Grid::centered(0.0, 4.5, 24);
  const FullHamiltonian h = assemble_full(g, kWell, s.modes, GaugeVector{0.4, 0.9},
                                          FockSpace({4, 3}));
  const auto r = real_form(h.op);
  REQUIRE(r.has_value());
  const RealMatrix rd = r->to_dense();
  CHECK((rd - rd.transpose()).cwiseAbs().maxCoeff() < 1e-13);

  const EigenResult c = dense_eigenpairs(h.op.to_dense(), 4, true);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(rd);
  CHECK((es.eigenvalues().head(4) - c.values).cwiseAbs().maxCoeff() < 1e-11);

  const ComplexVector v = from_real_frame(es.eigenvectors().col(0), h.op);
  ComplexVector hv;
  h.op.apply(v, hv);
  CHECK((hv - es.eigenvalues()(0) * v).norm() < 1e-10);

  KroneckerSum unknown = h.op;
  unknown.set_photon_occupation({});
  CHECK_FALSE(real_form(unknown).has_value());
}

TEST_CASE("exact spectrum is gauge invariant") {
  const CavitySystem s = system_for({1.0}, 0.8);
  const Grid g = default_grid(kWell);
  const FockSpace f({24});
  const RealVector e0 = lowest(assemble_full(g, kWell, s.modes, {0.0}, f).op, 6);
  for (double eta : {0.25, 0.5, 1.0, 1.3}) {
    const RealVector e = lowest(assemble_full(g, kWell, s.modes, {eta}, f).op, 6);
    CHECK((e - e0).cwiseAbs().maxCoeff() < 1e-7 * s.delta);
  }
}

TEST_CASE("tilt covariance: a tilt equals a photon displacement") {
  // Displacing the photons by b -> b + i a maps H to H + F x + a w Y + w a^2
  // with F = -2 a eta w A, in the dipole gauge.
  const CavitySystem s = system_for({1.0}, 0.4);
  const double w = s.modes[0].omega, A = s.modes[0].amplitude;
  const double F = 0.01;
  const double a = -F / (2.0 * w * A);
  PotentialSpec tilted = kWell;
  tilted.tilt = F;
  const Grid g = default_grid(kWell);
  const FockSpace f({28});
  const FullHamiltonian h0 = assemble_full(g, kWell, s.modes, {1.0}, f);
  FullHamiltonian h1 = assemble_full(g, tilted, s.modes, {1.0}, f);
  h1.op.add_photon_only(cplx(a * w) * mode_operator(f, 0, ModeOperatorKind::momentum));
  const RealVector e0 = lowest(h0.op, 5);
  const RealVector e1 = lowest(h1.op, 5);
  CHECK(((e1.array() + w * a * a) - e0.array()).abs().maxCoeff() < 1e-9);

  // The renormalized truncated model has no such symmetry.
  auto excitations = [&](const PotentialSpec& p) {
    const TruncatedModel m =
        build_truncated_model(BasisKind::renormalized, 2, s.modes, {1.0}, g, p);
    const RealVector e = lowest(assemble_truncated(m, f), 4);
    return RealVector(e.tail(3).array() - e(0));
  };
  CHECK((excitations(tilted) - excitations(kWell)).cwiseAbs().maxCoeff() > 1e-6 * s.delta);
}

TEST_CASE("two-level coefficients of the truncated model") {
  const CavitySystem s = system_for({1.0}, 0.8);
  const Grid g = default_grid(kWell);
  const TruncatedModel bare =
      build_truncated_model(BasisKind::bare, 2, s.modes, {0.4}, g, kWell);
  CHECK(bare.splitting == doctest::Approx(s.delta).epsilon(1e-10));
  CHECK(std::abs(bare.g_coulomb[0]) == doctest::Approx(s.coupling).epsilon(1e-10));
  const double x01 = std::abs(bare.elements.x(0, 1));
  CHECK(std::abs(bare.g_dipole[0]) ==
        doctest::Approx(s.modes[0].omega * s.modes[0].amplitude * x01).epsilon(1e-10));
  REQUIRE(bare.delta.size() == 1);
  CHECK_FALSE(bare.near_degenerate);

  // The bare atomic block carries the x^2 term; the renormalized one does not.
  const ComplexMatrix block = bare.atomic_block();
  const double wa2 = 0.16 * s.modes[0].omega * std::pow(s.modes[0].amplitude, 2);
  CHECK(std::abs(block(0, 0) - (bare.basis.energies(0) + wa2 * bare.elements.xsq(0, 0))) <
        1e-12);
  const TruncatedModel ren =
      build_truncated_model(BasisKind::renormalized, 2, s.modes, {0.4}, g, kWell);
  CHECK(ren.delta.empty());
  CHECK(std::abs(ren.atomic_block()(0, 1)) < 1e-14);
  CHECK(ren.basis.renormalization_weights[0] == doctest::Approx(wa2));
}

TEST_CASE("truncated model at zero coupling is atom plus free photons") {
  const CavitySystem s = system_for({1.0}, 0.0);
  const TruncatedModel m =
      build_truncated_model(BasisKind::bare, 2, s.modes, {0.5}, default_grid(kWell), kWell);
  const RealVector e = lowest(assemble_truncated(m, FockSpace({6})), 4);
  const double w = s.modes[0].omega;
  CHECK(e(1) - e(0) == doctest::Approx(std::min(w, s.delta)).epsilon(1e-10));
}

TEST_CASE("assembly rejects inconsistent sizes") {
  const CavitySystem s = system_for({1.0}, 0.5);
  CHECK_THROWS_AS(assemble_full(default_grid(kWell), kWell, s.modes, {0.5, 0.5},
                                FockSpace({4})),
                  DimensionError);
  CHECK_THROWS_AS(assemble_full(default_grid(kWell), kWell, s.modes, {0.5},
                                FockSpace({4, 4})),
                  DimensionError);
}
