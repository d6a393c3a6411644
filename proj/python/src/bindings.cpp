// Python bindings: meshes, convergence sweeps and the self-test suite.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sfwg/selftest.hpp"
#include "sfwg/study.hpp"

namespace py = pybind11;

namespace {

sfwg::SchemeConfig make_config(int k, int j, double theta, int steps, double t_end, const std::string& solver,
                               const std::string& initial) {
  sfwg::SchemeConfig c;
  c.k = k;
  c.j = j;
  c.theta = theta;
  c.steps = steps;
  c.t_end = t_end;
  if (solver == "cg") {
    c.solver.kind = sfwg::SolverKind::Cg;
  } else if (solver != "direct") {
    throw std::invalid_argument("solver must be 'direct' or 'cg'");
  }
  if (initial == "elliptic") {
    c.initial = sfwg::InitialValue::EllipticProjection;
  } else if (initial != "interpolant") {
    throw std::invalid_argument("initial must be 'interpolant' or 'elliptic'");
  }
  c.validate();
  return c;
}

py::object opt(const std::optional<double>& v) { return v ? py::object(py::float_(*v)) : py::object(py::none()); }

py::list rows(const sfwg::StudyReport& r) {
  py::list out;
  for (const sfwg::StudyRow& row : r.rows) {
    py::dict d;
    d["level"] = row.level;
    d["step"] = row.step;
    d["trb_err"] = row.error.trb;
    d["trb_rate"] = opt(row.trb_rate);
    d["h2_err"] = row.error.h2;
    d["h2_rate"] = opt(row.h2_rate);
    d["l2_err"] = row.error.l2;
    d["l2_rate"] = opt(row.l2_rate);
    d["dofs"] = row.dofs;
    out.append(d);
  }
  return out;
}

int default_j(const sfwg::MeshSpec& spec, int k, std::optional<int> j) { return j.value_or(k + spec.default_j_offset()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stabilizer-free weak Galerkin solver for u_t + biharmonic(u) = f";

  py::class_<sfwg::Mesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &sfwg::Mesh::num_vertices)
      .def_property_readonly("num_cells", &sfwg::Mesh::num_cells)
      .def_property_readonly("num_edges", &sfwg::Mesh::num_edges)
      .def_property_readonly("num_boundary_edges", &sfwg::Mesh::num_boundary_edges);

  m.def("triangle_mesh", &sfwg::build_uniform_triangle_mesh, py::arg("n"));
  m.def("quad_mesh", &sfwg::build_quad_mesh, py::arg("n"));
  m.def("read_mesh", &sfwg::read_mesh_file, py::arg("path"));

  m.def(
      "convergence_h",
      [](std::vector<int> ns, const std::string& mesh, int k, std::optional<int> j, double theta, int steps, double t_end,
         const std::string& solver, const std::string& initial) {
        const sfwg::MeshSpec spec = sfwg::MeshSpec::parse(mesh);
        const sfwg::SchemeConfig c = make_config(k, default_j(spec, k, j), theta, steps, t_end, solver, initial);
        py::gil_scoped_release release;
        sfwg::StudyReport r = sfwg::run_convergence_h(c, spec, ns);
        py::gil_scoped_acquire acquire;
        return rows(r);
      },
      py::arg("ns"), py::arg("mesh") = "tri", py::arg("k") = 2, py::arg("j") = py::none(), py::arg("theta") = 1.0,
      py::arg("steps") = 100, py::arg("t_end") = 1.0, py::arg("solver") = "direct", py::arg("initial") = "interpolant",
      "Spatial sweep; one dict per level with errors and observed rates.");

  m.def(
      "convergence_tau",
      [](std::vector<int> steps, int n, const std::string& mesh, int k, std::optional<int> j, double theta,
         double t_end, std::optional<int> reference_steps, const std::string& solver, const std::string& initial) {
        const sfwg::MeshSpec spec = sfwg::MeshSpec::parse(mesh);
        const sfwg::SchemeConfig c =
            make_config(k, default_j(spec, k, j), theta, steps.front(), t_end, solver, initial);
        py::gil_scoped_release release;
        sfwg::StudyReport r = sfwg::run_convergence_tau(c, spec, n, steps, reference_steps);
        py::gil_scoped_acquire acquire;
        return rows(r);
      },
      py::arg("steps"), py::arg("n") = 8, py::arg("mesh") = "tri", py::arg("k") = 2, py::arg("j") = py::none(),
      py::arg("theta") = 1.0, py::arg("t_end") = 1.0, py::arg("reference_steps") = py::none(),
      py::arg("solver") = "direct", py::arg("initial") = "interpolant",
      "Temporal sweep on a fixed mesh; one dict per step count.");

  m.def(
      "selftest",
      [](bool inject_sign_flip) {
        sfwg::SelftestOptions o;
        o.inject_sign_flip = inject_sign_flip;
        py::dict out;
        for (const sfwg::PropertyResult& r : sfwg::run_selftest(o)) {
          out[py::str(r.name)] = py::make_tuple(r.passed, r.detail);
        }
        return out;
      },
      py::arg("inject_sign_flip") = false, "Property name -> (passed, detail).");

  m.def("weak_laplacian_exactness_error", &sfwg::weak_laplacian_exactness_error, py::arg("family"), py::arg("n"),
        py::arg("k"), py::arg("j"), py::arg("flip_normal_sign") = false);
}
