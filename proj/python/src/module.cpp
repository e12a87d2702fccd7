#include <pybind11/pybind11.h>

#include "optgauge/config.hpp"

namespace py = pybind11;

namespace bindings {
void init_physics(py::module_&);
void init_runs(py::module_&);
}  // namespace bindings

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of optgauge";
  m.attr("__version__") = optgauge::tool_version();
  bindings::init_physics(m);
  bindings::init_runs(m);
}
