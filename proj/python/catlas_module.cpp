#include "catlas/contact_core.hpp"
#include "catlas/fixtures.hpp"
#include "catlas/json_io.hpp"
#include "catlas/topology_bounds.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace catlas;

namespace {

std::string bounds_json(const std::string& descriptor) {
  const ManifoldDescriptor m = descriptor_from_json(json::parse(descriptor));
  json out = {{"descriptor", to_json(m)}, {"category", to_json(category_bounds(m))}};
  if (m.dim % 2 == 1) out["C"] = to_json(covering_number_bounds(m));
  return out.dump();
}

std::string foliation_json(const std::string& path) {
  const auto fx = load_foliation_fixture(path);
  return to_json(analyze_fixture(fx)).dump();
}

std::string separation_json(int d, const std::string& s, int color, const std::string& lo, const std::string& hi) {
  Box window;
  for (int k = 0; k < d; ++k) {
    window.lo.push_back(parse_rational(lo));
    window.hi.push_back(parse_rational(hi));
  }
  return to_json(separation_report(d, parse_rational(s), color, window)).dump();
}

std::vector<double> hamiltonian_field(const std::string& polynomial, const std::vector<double>& point) {
  if (point.size() != 3) throw Error("precondition", "point must have 3 coordinates");
  const auto X = field_of_hamiltonian(scalar_from_polynomial(polynomial_from_json(json::parse(polynomial))),
                                      make_form(FormKind::standard, 1));
  const Vec v = X.f(Eigen::Map<const Vec>(point.data(), 3));
  return {v[0], v[1], v[2]};
}

double psi_residual(int n, int samples, std::uint64_t seed) {
  Rng rng(seed);
  return pullback_report(psi_normalizer(n), make_form(FormKind::standard, n), make_form(FormKind::rotational, n), 2.0,
                         box_samples(2 * n + 1, samples, rng, 2.0), 1e-12)
      .max_residual;
}

}  // namespace

PYBIND11_MODULE(_catlas, m) {
  m.doc() = "catlas core bindings";
  m.attr("schema_version") = kSchemaVersion;
  py::register_exception<Error>(m, "CatlasError", PyExc_ValueError);
  m.def("bounds_json", &bounds_json, py::arg("descriptor"));
  m.def("foliation_json", &foliation_json, py::arg("path"), py::call_guard<py::gil_scoped_release>());
  m.def("separation_json", &separation_json, py::arg("d"), py::arg("s"), py::arg("color"), py::arg("lo"),
        py::arg("hi"));
  m.def("hamiltonian_field", &hamiltonian_field, py::arg("polynomial"), py::arg("point"));
  m.def("psi_residual", &psi_residual, py::arg("n"), py::arg("samples"), py::arg("seed") = 0);
  m.def("cup_length_torus", [](int n) { return cup_length(torus_ring(n)); });
  m.def("cup_length_sphere", [](int n) { return cup_length(sphere_ring(n)); });
  m.def("cup_length_projective", [](int n) { return cup_length(truncated_polynomial_ring(1, n)); });
}
