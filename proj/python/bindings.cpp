#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcflow/errors.hpp"
#include "mcflow/geometry.hpp"
#include "mcflow/mesh.hpp"
#include "mcflow/pfunc.hpp"
#include "mcflow/radial.hpp"
#include "mcflow/report_io.hpp"
#include "mcflow/solver.hpp"
#include "mcflow/verify.hpp"

namespace py = pybind11;
using namespace mcflow;

namespace {

Eigen::MatrixX2d points(const std::vector<Vec2>& v) {
  Eigen::MatrixX2d out(v.size(), 2);
  for (std::size_t i = 0; i < v.size(); ++i) out.row(i) = v[i].transpose();
  return out;
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

struct Solution {
  std::shared_ptr<const Mesh> mesh;
  SolveResult result;
  GradientField grads;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mean-curvature Dirichlet problems on convex planar domains";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<AlphaOne>(m, "AlphaOne", base.ptr());
  py::register_exception<SlopeBlowup>(m, "SlopeBlowup", base.ptr());
  py::register_exception<NoCriticalPoint>(m, "NoCriticalPoint", base.ptr());

  py::class_<Domain>(m, "Domain")
      .def_static("ellipse", &Domain::ellipse, py::arg("a"), py::arg("b"))
      .def_static(
          "fourier",
          [](double r0, const std::vector<std::tuple<int, double, double>>& harmonics) {
            std::vector<Harmonic> hs;
            for (const auto& [k, c, s] : harmonics) hs.push_back({k, c, s});
            return Domain::fourier(r0, hs);
          },
          py::arg("r0"), py::arg("harmonics"), "r(t) = r0 + sum c cos kt + s sin kt")
      .def("curvature", &Domain::curvature, py::arg("t"))
      .def("position", &Domain::position, py::arg("t"))
      .def("kappa_max", [](const Domain& d) { return kappa_max(d); })
      .def("inradius", [](const Domain& d) { return inradius(d); })
      .def("contains", [](const Domain& d, const Vec2& p) { return contains(d, p); })
      .def_property_readonly("perimeter", &Domain::perimeter)
      .def_property_readonly("area", &Domain::area)
      .def("__repr__", [](const Domain& d) { return describe(d); });

  py::class_<Problem>(m, "Problem")
      .def_static("power_mc", &Problem::power_mc, py::arg("alpha"))
      .def_static("constant_forcing", &Problem::constant_forcing, py::arg("mu"))
      .def_property_readonly("parameter", &Problem::parameter)
      .def_property_readonly("is_power", &Problem::is_power)
      .def("__repr__", &Problem::name);

  py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
      .def_property_readonly("vertices", [](const Mesh& mesh) { return points(mesh.vertices()); })
      .def_property_readonly("triangles",
                             [](const Mesh& mesh) {
                               Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor> t(
                                   mesh.num_triangles(), 3);
                               for (int i = 0; i < mesh.num_triangles(); ++i) {
                                 for (int k = 0; k < 3; ++k) t(i, k) = mesh.triangles()[i][k];
                               }
                               return t;
                             })
      .def_property_readonly("num_boundary", &Mesh::num_boundary)
      .def_property_readonly("h", &Mesh::h)
      .def_property_readonly("total_area", &Mesh::total_area)
      .def_property_readonly("min_angle_degrees", &Mesh::min_angle_degrees);

  m.def("triangulate",
        [](const Domain& d, double h) { return std::make_shared<Mesh>(triangulate(d, h)); },
        py::arg("domain"), py::arg("h"));

  m.def("residual",
        [](const Mesh& mesh, const Eigen::VectorXd& u, const Problem& p) { return residual(mesh, u, p); },
        py::arg("mesh"), py::arg("u"), py::arg("problem"));

  py::class_<Solution>(m, "Solution")
      .def_property_readonly("u", [](const Solution& s) { return s.result.field.values; })
      .def_property_readonly("gradients",
                             [](const Solution& s) {
                               Eigen::MatrixX2d g(s.mesh->num_vertices(), 2);
                               for (int v = 0; v < s.mesh->num_vertices(); ++v) {
                                 g.row(v) = s.grads.gradient(v).transpose();
                               }
                               return g;
                             })
      .def_property_readonly("normal_derivative",
                             [](const Solution& s) { return s.grads.normal_derivative; })
      .def_property_readonly("iterations", [](const Solution& s) { return s.result.iterations; })
      .def_property_readonly("final_residual", [](const Solution& s) { return s.result.final_residual; })
      .def_property_readonly("mesh", [](const Solution& s) { return std::const_pointer_cast<Mesh>(s.mesh); });

  m.def(
      "solve",
      [](std::shared_ptr<Mesh> mesh, const Problem& p, double tol, int max_iters, int continuation) {
        SolveOptions o;
        o.residual_tol = tol;
        o.max_iters = max_iters;
        o.continuation_steps = continuation;
        Solution s;
        s.mesh = mesh;
        {
          py::gil_scoped_release release;
          s.result = newton_solve(mesh, p, o);
          s.grads = recover_gradient(s.result.field);
        }
        return s;
      },
      py::arg("mesh"), py::arg("problem"), py::arg("residual_tol") = 1e-10, py::arg("max_iters") = 50,
      py::arg("continuation_steps") = 1);

  py::class_<RadialSolution>(m, "RadialSolution")
      .def_readonly("R", &RadialSolution::R)
      .def_readonly("r", &RadialSolution::r)
      .def_readonly("p", &RadialSolution::p)
      .def_readonly("u", &RadialSolution::u)
      .def_property_readonly("u_min", &RadialSolution::u_min)
      .def_property_readonly("q", &RadialSolution::boundary_slope)
      .def("u_at", &RadialSolution::u_at, py::arg("r"))
      .def("p_at", &RadialSolution::p_at, py::arg("r"));

  m.def("solve_radial", &solve_radial, py::arg("problem"), py::arg("R") = 1.0, py::arg("n") = 10000);
  m.def("series_start", &series_start, py::arg("problem"));

  m.def("phi", &phi, py::arg("alpha"), py::arg("beta"), py::arg("u"), py::arg("grad"));
  m.def("psi", &psi, py::arg("mu"), py::arg("beta"), py::arg("v"), py::arg("grad"));

  m.def(
      "check_bounds",
      [](double q_min, double u_min, double kappa_max, double d, const Problem& p) {
        py::list out;
        for (const auto& b : check_bounds(q_min, u_min, kappa_max, d, p)) {
          py::dict e;
          e["name"] = to_string(b.name);
          e["lhs"] = b.lhs;
          e["rhs"] = b.rhs;
          e["slack"] = b.slack;
          e["holds"] = b.holds;
          e["applicable"] = b.applicable;
          out.append(e);
        }
        return out;
      },
      py::arg("q_min"), py::arg("u_min"), py::arg("kappa_max"), py::arg("d"), py::arg("problem"));

  m.def(
      "verify",
      [](const Domain& d, const Problem& p, double h, const std::vector<double>& betas) {
        VerificationReport rep;
        {
          py::gil_scoped_release release;
          rep = full_report(d, p, h, betas);
        }
        return json_to_py(to_json(rep));
      },
      py::arg("domain"), py::arg("problem"), py::arg("h") = 0.05,
      py::arg("betas") = std::vector<double>{1.0, 1.5, 2.0},
      "Full verification run; returns the report as a dict.");
}
