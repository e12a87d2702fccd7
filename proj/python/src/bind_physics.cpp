#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "optgauge/hamiltonian.hpp"
#include "optgauge/metrics.hpp"
#include "optgauge/photon.hpp"
#include "optgauge/spectra.hpp"

namespace py = pybind11;
using namespace optgauge;

namespace bindings {

namespace {

PotentialSpec double_well(double gamma, double shift, double tilt) {
  PotentialSpec p = PotentialSpec::double_well_from_gamma(gamma);
  p.shift = shift;
  p.tilt = tilt;
  p.validate();
  return p;
}

py::dict atom_levels(double gamma, int levels, double shift, double tilt) {
  const PotentialSpec p = double_well(gamma, shift, tilt);
  const AtomBasis b = solve_atom_adaptive(p, {}, GaugeVector{}, default_grid(p),
                                          std::max(levels, 3));
  const MatrixElements me = matrix_elements(b, std::max(levels, 3));
  py::dict out;
  out["energies"] = RealVector(b.energies);
  out["delta"] = b.transition();
  out["anharmonicity"] = b.anharmonicity();
  out["x"] = ComplexMatrix(me.x);
  out["p"] = ComplexMatrix(me.p);
  out["grid_points"] = b.grid.points();
  out["wavefunctions"] = RealMatrix(b.wavefunctions);
  return out;
}

CavitySystem system(double gamma, const std::vector<double>& frequencies,
                    double coupling) {
  const PotentialSpec p = double_well(gamma, 0.0, 0.0);
  return resolve_system(p, frequencies, coupling, default_grid(p));
}

// Lowest excitation energies in units of Delta, fixed numerical settings.
RealVector exact_excitations(double gamma, const std::vector<double>& frequencies,
                             double coupling, const std::vector<double>& gauge,
                             const std::vector<int>& cutoffs, int energies) {
  const CavitySystem s = system(gamma, frequencies, coupling);
  NumericalSettings n = default_settings(s);
  n.cutoffs = cutoffs;
  py::gil_scoped_release release;
  const EigenResult r =
      solve_exact(s, GaugeVector(gauge), n, energies + 1, 1e-10 * s.delta, false);
  return excitation_energies(r.values, energies) / s.delta;
}

RealVector truncated_excitations(double gamma, const std::vector<double>& frequencies,
                                 double coupling, const std::vector<double>& gauge,
                                 const std::vector<int>& cutoffs, const std::string& basis,
                                 int levels, int energies) {
  const PotentialSpec p = double_well(gamma, 0.0, 0.0);
  const CavitySystem s = system(gamma, frequencies, coupling);
  const TruncatedModel m = build_truncated_model(basis_kind_from_string(basis), levels,
                                                 s.modes, GaugeVector(gauge),
                                                 default_grid(p), p);
  EigenRequest req;
  req.k = energies + 1;
  req.want_vectors = false;
  const EigenResult r = lowest_eigenpairs(assemble_truncated(m, FockSpace(cutoffs)), req);
  return excitation_energies(r.values, energies) / s.delta;
}

py::dict bogoliubov(const std::vector<double>& omega, const std::vector<double>& amplitude,
                    const std::vector<double>& gauge) {
  if (omega.size() != amplitude.size()) {
    throw DimensionError("omega and amplitude lengths differ");
  }
  std::vector<ModeSpec> modes;
  for (std::size_t k = 0; k < omega.size(); ++k) modes.push_back({omega[k], amplitude[k]});
  const BogoliubovResult r = bogoliubov_diagonalize(modes, GaugeVector(gauge));
  py::dict out;
  out["frequencies"] = RealVector(r.frequencies);
  out["symplectic"] = RealMatrix(r.symplectic);
  out["vacuum_energy"] = r.vacuum_energy;
  out["symplectic_residual"] = r.symplectic_residual();
  return out;
}

}  // namespace

void init_physics(py::module_& m) {
  // Translators are tried newest first, so the base class goes in first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<NormError>(m, "NormError", base.ptr());

  m.def("atom_levels", &atom_levels, py::arg("gamma") = 64.0, py::arg("levels") = 4,
        py::arg("shift") = 0.0, py::arg("tilt") = 0.0,
        "Bare double-well levels, x and p matrix elements and wavefunctions.");

  m.def(
      "resolve_system",
      [](double gamma, const std::vector<double>& frequencies, double coupling) {
        const CavitySystem s = system(gamma, frequencies, coupling);
        py::dict out;
        out["delta"] = s.delta;
        out["coupling"] = s.coupling;
        std::vector<double> w, a;
        for (const auto& mode : s.modes) {
          w.push_back(mode.omega);
          a.push_back(mode.amplitude);
        }
        out["omega"] = w;
        out["amplitude"] = a;
        return out;
      },
      py::arg("gamma"), py::arg("frequencies"), py::arg("coupling"),
      "Absolute mode frequencies and amplitudes; inputs in units of Delta.");

  m.def("exact_excitations", &exact_excitations, py::arg("gamma"), py::arg("frequencies"),
        py::arg("coupling"), py::arg("gauge"), py::arg("cutoffs"), py::arg("energies") = 7,
        "Excitation energies (units of Delta) of the full model at fixed cutoffs.");
  m.def("truncated_excitations", &truncated_excitations, py::arg("gamma"),
        py::arg("frequencies"), py::arg("coupling"), py::arg("gauge"), py::arg("cutoffs"),
        py::arg("basis") = "bare", py::arg("levels") = 2, py::arg("energies") = 7,
        "Excitation energies (units of Delta) of the M-level truncated model.");
  m.def("bogoliubov", &bogoliubov, py::arg("omega"), py::arg("amplitude"),
        py::arg("gauge"));

  m.def(
      "spectral_deviation",
      [](const RealVector& a, const RealVector& b) { return spectral_deviation(a, b); },
      py::arg("exact"), py::arg("truncated"));
  m.def("entanglement_entropy", &entanglement_entropy, py::arg("state"),
        py::arg("atom_dim"), py::arg("fock_dim"));
  m.def("schmidt_weights", &schmidt_weights, py::arg("state"), py::arg("atom_dim"),
        py::arg("fock_dim"));
  m.def("ground_state_fidelity", &ground_state_fidelity, py::arg("a"), py::arg("b"));
  m.def(
      "lowest_eigenvalues",
      [](const ComplexMatrix& h, int k, bool krylov) {
        EigenRequest r;
        r.k = k;
        r.want_vectors = false;
        r.method = krylov ? EigenMethod::krylov : EigenMethod::dense;
        return RealVector(lowest_eigenpairs(make_operator(h), r).values);
      },
      py::arg("matrix"), py::arg("k"), py::arg("krylov") = true,
      "Lowest k eigenvalues of a dense Hermitian matrix.");
}

}  // namespace bindings
