#include <doctest.h>

#include <cmath>

#include "mcflow/errors.hpp"
#include "mcflow/pfunc.hpp"
#include "support.hpp"

using namespace mcflow;
using mcflow::testing::cached_run;
using mcflow::testing::ellipse21;
using mcflow::testing::fourier_circle;
using mcflow::testing::unit_disk;

TEST_CASE("phi point values") {
  CHECK(phi(3.0, 2.0, 0.0, Vec2(0, 0)) == doctest::Approx(1.0));
  CHECK(phi(3.0, 2.0, -1.0, Vec2(1, 0)) == doctest::Approx(4.0));
  CHECK(phi(2.0, 1.0, 0.0, Vec2(0, std::sqrt(3.0))) == doctest::Approx(4.0));
  CHECK_THROWS_AS(phi(1.0, 1.0, 0.0, Vec2(0, 0)), AlphaOne);
}

TEST_CASE("psi point values") {
  CHECK(psi(1.0, 1.7, 0.0, Vec2(0, 0)) == doctest::Approx(std::log(0.25)).epsilon(1e-12));
  CHECK(psi(0.0, 2.0, -1.0, Vec2(0, 0)) == doctest::Approx(2.0));
  CHECK(psi(1.0, 1.0, -1.0, Vec2(std::sqrt(3.0), 0)) == doctest::Approx(0.18907).epsilon(1e-5));
  CHECK_THROWS_AS(psi(-0.1, 1.0, 0.0, Vec2(0, 0)), InvalidArgument);
}

TEST_CASE("P-function fields") {
  const auto& run = cached_run("ellipse", ellipse21(), Problem::power_mc(2.0), 0.05);
  const PFunctionField a = evaluate_field(run.solve.field, run.grads, Problem::power_mc(2.0), 1.0);
  const PFunctionField b = evaluate_field(run.solve.field, run.grads, PKind::Phi, 2.0, 1.7);
  const Mesh& m = *run.mesh;

  SUBCASE("beta monotonicity is exact") {
    for (int v = 0; v < m.num_vertices(); ++v) {
      CHECK(b.values[v] - a.values[v] >= -1e-15);
      CHECK(b.values[v] - a.values[v] ==
            doctest::Approx(-0.7 * run.solve.field.values[v]).epsilon(1e-12).scale(1.0));
    }
  }
  SUBCASE("boundary values do not depend on beta") {
    for (int v = 0; v < m.num_boundary(); ++v) CHECK(std::abs(a.values[v] - b.values[v]) <= 1e-12);
  }
  SUBCASE("extrema bookkeeping") {
    for (double x : a.values) {
      CHECK(std::isfinite(x));
      CHECK(x >= a.values[a.argmin_vertex]);
      CHECK(x <= a.values[a.argmax_vertex]);
    }
    CHECK(a.range() > 1e-6 * std::abs(a.values[a.argmax_vertex]));
    CHECK(a.kind == PKind::Phi);
    CHECK(to_string(PKind::Psi) == "Psi");
  }
}

TEST_CASE("Phi is refused for the soliton equation") {
  const auto& run = cached_run("disk", unit_disk(), Problem::power_mc(1.0), 0.05);
  CHECK_THROWS_AS(evaluate_field(run.solve.field, run.grads, Problem::power_mc(1.0), 1.5), AlphaOne);
  // Psi with mu = 0 is a separate, explicit choice.
  CHECK_NOTHROW(evaluate_field(run.solve.field, run.grads, PKind::Psi, 0.0, 1.5));
}

TEST_CASE("boundary minimum on a fine beta sweep") {
  struct Case {
    const char* key;
    Domain domain;
    Problem problem;
  };
  const Case cases[] = {{"disk", unit_disk(), Problem::power_mc(3.0)},
                        {"disk", unit_disk(), Problem::constant_forcing(0.5)},
                        {"ellipse", ellipse21(), Problem::power_mc(2.0)},
                        {"fourier", fourier_circle(), Problem::constant_forcing(0.5)}};
  for (const auto& c : cases) {
    const auto& run = cached_run(c.key, c.domain, c.problem, 0.05);
    for (double beta : {1.0, 1.25, 1.5, 1.75, 2.0}) {
      const PFunctionField f = evaluate_field(run.solve.field, run.grads, c.problem, beta);
      INFO(c.key << " " << c.problem.name() << " beta=" << beta);
      CHECK(f.min_on_boundary);
    }
  }
}
