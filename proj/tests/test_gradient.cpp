#include <doctest.h>

#include <cmath>

#include "mcflow/errors.hpp"
#include "mcflow/gradient.hpp"
#include "mcflow/radial.hpp"
#include "mcflow/solver.hpp"
#include "support.hpp"

using namespace mcflow;
using mcflow::testing::cached_mesh;
using mcflow::testing::cached_run;
using mcflow::testing::fourier_circle;
using mcflow::testing::unit_disk;

namespace {

ScalarField sample(std::shared_ptr<const Mesh> m, auto&& f) {
  ScalarField s{m, Eigen::VectorXd(m->num_vertices())};
  for (int v = 0; v < m->num_vertices(); ++v) s.values[v] = f(m->vertices()[v]);
  return s;
}

// Radial oracle sampled at the vertices, exactly zero on the boundary.
ScalarField radial_field(std::shared_ptr<const Mesh> m, const RadialSolution& sol) {
  ScalarField s = sample(m, [&](const Vec2& x) { return sol.u_at(x.norm()); });
  for (int b = 0; b < m->num_boundary(); ++b) s.values[b] = 0.0;
  return s;
}

}  // namespace

TEST_CASE("triangle gradients are exact on linear fields") {
  const auto m = cached_mesh("fourier", fourier_circle(), 0.1);
  const ScalarField f = sample(m, [](const Vec2& x) { return x.x(); });
  const GradientField g = recover_gradient(f, {BoundaryFit::NormalLine});
  for (const Vec2& t : g.triangle_gradients) CHECK((t - Vec2(1, 0)).norm() <= 1e-12);
  for (int v = m->num_boundary(); v < m->num_vertices(); ++v) {
    CHECK((g.vertex_gradients[v] - Vec2(1, 0)).norm() <= 1e-12);
  }
}

TEST_CASE("vertex gradients of x^2") {
  const auto m = cached_mesh("disk", unit_disk(), 0.05);
  const ScalarField f = sample(m, [](const Vec2& x) { return x.x() * x.x(); });
  for (InteriorFit fit : {InteriorFit::Average, InteriorFit::Patch}) {
    GradientOptions opts;
    opts.interior = fit;
    const GradientField g = recover_gradient(f, opts);
    double err = 0.0;
    for (int v = 0; v < m->num_vertices(); ++v) {
      err = std::max(err, (g.vertex_gradients[v] - Vec2(2 * m->vertices()[v].x(), 0)).norm());
    }
    CHECK(err <= 0.15);
    // A quadratic patch reproduces quadratics at interior vertices.
    if (fit == InteriorFit::Patch) {
      for (int v = m->num_boundary(); v < m->num_vertices(); ++v) {
        CHECK((g.vertex_gradients[v] - Vec2(2 * m->vertices()[v].x(), 0)).norm() <= 1e-9);
      }
    }
  }
}

TEST_CASE("boundary derivatives from oracle nodal values") {
  const auto m = cached_mesh("disk", unit_disk(), 0.05);
  struct Case {
    Problem problem;
    double un_tol, unn_tol;
  };
  // The steep mu = 1 profile leaves visible truncation error in the fit.
  for (const auto& [p, un_tol, unn_tol] : {Case{Problem::power_mc(2.0), 1e-4, 1e-3},
                                          Case{Problem::constant_forcing(1.0), 1e-2, 0.1}}) {
    const RadialSolution sol = solve_radial(p, 1.0);
    const GradientField g = recover_gradient(radial_field(m, sol));
    const double q = sol.boundary_slope();
    const double qq = slope_ode_rhs(p, 1.0, q);
    for (int b = 0; b < m->num_boundary(); ++b) {
      CHECK(g.normal_derivative[b] == doctest::Approx(q).epsilon(un_tol));
      CHECK(g.normal_second_derivative[b] == doctest::Approx(qq).epsilon(unn_tol));
    }
  }
}

TEST_CASE("boundary normal derivative of the discrete solution") {
  for (const Problem& p : {Problem::power_mc(1.0), Problem::constant_forcing(1.0)}) {
    const auto& run = cached_run("disk", unit_disk(), p, 0.05);
    const double q = solve_radial(p, 1.0).boundary_slope();
    for (double un : run.grads.normal_derivative) {
      CHECK(un > 0.0);
      CHECK(std::abs(un - q) <= 0.02 * q);
    }
    // The gradient accessor returns u_n n on the boundary.
    const auto& bp = run.mesh->boundary_point(0);
    CHECK((run.grads.gradient(0) - run.grads.normal_derivative[0] * bp.outward_normal).norm() == 0.0);
  }
}

TEST_CASE("normal-line fit is available and falls back once") {
  const auto m = cached_mesh("disk", unit_disk(), 0.05);
  const Problem p = Problem::power_mc(2.0);
  const RadialSolution sol = solve_radial(p, 1.0);
  const ScalarField f = radial_field(m, sol);
  GradientOptions line{BoundaryFit::NormalLine};
  const GradientField g = recover_gradient(f, line);
  CHECK(g.fit_scale == doctest::Approx(m->h()));
  for (double un : g.normal_derivative) CHECK(un == doctest::Approx(sol.boundary_slope()).epsilon(0.05));

  line.scale = 5.0;  // both 5 and 2.5 step outside the unit disk
  CHECK_THROWS_AS(recover_gradient(f, line), InterpolationOutsideDomain);
  line.scale = 0.3;  // 2 * 0.3 stays inside
  CHECK_NOTHROW(recover_gradient(f, line));
}

TEST_CASE("gradient accessors") {
  const auto m = cached_mesh("disk", unit_disk(), 0.1);
  const ScalarField f = sample(m, [](const Vec2& x) { return x.squaredNorm() - 1.0; });
  const GradientField g = recover_gradient(f);
  CHECK_THROWS_AS(g.gradient(-1), UnknownVertex);
  const int v = m->num_boundary();
  CHECK(g.slope_factor(v) == doctest::Approx(std::sqrt(1 + g.gradient(v).squaredNorm())));
  CHECK(g.boundary_gradient_min() == doctest::Approx(2.0).epsilon(1e-2));
}
