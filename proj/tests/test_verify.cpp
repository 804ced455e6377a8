#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mcflow/errors.hpp"
#include "mcflow/radial.hpp"
#include "mcflow/verify.hpp"
#include "support.hpp"

using namespace mcflow;
using mcflow::testing::cached_mesh;
using mcflow::testing::cached_run;
using mcflow::testing::ellipse21;
using mcflow::testing::fourier_circle;
using mcflow::testing::unit_disk;

namespace {

constexpr double kPi = std::numbers::pi;

const BoundCheck& bound(const std::vector<BoundCheck>& v, BoundName n) {
  return *std::find_if(v.begin(), v.end(), [&](const BoundCheck& b) { return b.name == n; });
}

}  // namespace

TEST_CASE("critical point census") {
  SUBCASE("unit disk") {
    for (const Problem& p : {Problem::power_mc(1.0), Problem::power_mc(3.0),
                             Problem::constant_forcing(1.0)}) {
      const auto& run = cached_run("disk", unit_disk(), p, 0.05);
      const auto rep = find_critical_points(run.grads);
      CHECK(rep.count == 1);
      CHECK(rep.points.front().position.norm() <= 2 * 0.05);
      CHECK(rep.tol == doctest::Approx(default_critical_tolerance(run.grads)));
    }
  }
  SUBCASE("ellipse") {
    const auto& run = cached_run("ellipse", ellipse21(), Problem::power_mc(2.0), 0.05);
    const auto rep = find_critical_points(run.grads);
    CHECK(rep.count == 1);
    CHECK(rep.points.front().position.norm() <= 2 * 0.05);
    // u is convex near its minimum.
    CHECK(rep.points.front().hessian_diag.x() > 0.0);
    CHECK(rep.points.front().hessian_diag.y() > 0.0);
  }
  SUBCASE("a linear field has none") {
    const auto m = cached_mesh("disk", unit_disk(), 0.1);
    ScalarField f{m, Eigen::VectorXd(m->num_vertices())};
    for (int v = 0; v < m->num_vertices(); ++v) f.values[v] = m->vertices()[v].x();
    CHECK_THROWS_AS(find_critical_points(recover_gradient(f)), NoCriticalPoint);
  }
}

TEST_CASE("z(theta) boundary zeros") {
  SUBCASE("unit disk") {
    const auto& run = cached_run("disk", unit_disk(), Problem::constant_forcing(0.5), 0.05);
    CHECK(z_theta_boundary_zeros(run.grads, 0.0) == 2);
  }
  SUBCASE("ellipse") {
    const auto& run = cached_run("ellipse", ellipse21(), Problem::power_mc(2.0), 0.05);
    for (double theta : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4}) {
      CHECK(z_theta_boundary_zeros(run.grads, theta) == 2);
    }
  }
  SUBCASE("theta and theta + pi share their zeros") {
    const auto& run = cached_run("fourier", fourier_circle(), Problem::power_mc(3.0), 0.05);
    for (double theta : {0.1, 0.9, 2.0}) {
      CHECK(z_theta_crossings(run.grads, theta) == z_theta_crossings(run.grads, theta + kPi));
    }
  }
}

TEST_CASE("boundary identity") {
  SUBCASE("exact radial data satisfies it") {
    for (const Problem& p : {Problem::power_mc(1.0), Problem::power_mc(2.5),
                             Problem::constant_forcing(1.0)}) {
      for (double R : {0.5, 1.0}) {
        const RadialSolution s = solve_radial(p, R);
        const std::vector<double> kappa(16, 1.0 / R), un(16, s.boundary_slope()),
            unn(16, s.dp.back());
        CHECK(boundary_identity_residual(kappa, un, unn, p) <= 1e-8);
      }
    }
  }
  SUBCASE("soliton on the disk converges") {
    const double r1 = cached_run("disk", unit_disk(), Problem::power_mc(1.0), 0.05)
                          .report.boundary_identity_residual;
    const double r2 = cached_run("disk", unit_disk(), Problem::power_mc(1.0), 0.025)
                          .report.boundary_identity_residual;
    CHECK(r1 <= 0.5);
    CHECK(r2 <= 0.5 * r1);
  }
  SUBCASE("constant forcing mu = 1 on the disk halves under refinement") {
    // The absolute level at h = 0.05 is discussed in the README.
    const double r1 = cached_run("disk", unit_disk(), Problem::constant_forcing(1.0), 0.05)
                          .report.boundary_identity_residual;
    const double r2 = cached_run("disk", unit_disk(), Problem::constant_forcing(1.0), 0.025)
                          .report.boundary_identity_residual;
    CHECK(r2 * 1.7 <= r1);
  }
}

TEST_CASE("bound formulas") {
  SUBCASE("Eq1_9 and Eq1_10") {
    const auto b = check_bounds(1.0, -1.0, 2.0, 1.0, Problem::power_mc(3.0));
    CHECK(bound(b, BoundName::Eq1_9).rhs == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    for (double alpha : {0.5, 2.0, 3.0}) {
      const auto c = check_bounds(1.0, -1.0, 1.0, 1.0, Problem::power_mc(alpha));
      CHECK(std::abs(bound(c, BoundName::Eq1_10).rhs) <= 1e-15);
    }
  }
  SUBCASE("Eq1_11 and Eq1_12") {
    const auto b = check_bounds(1.0, -1.0, 1.0, 1.0, Problem::constant_forcing(1.0));
    CHECK(bound(b, BoundName::Eq1_11).rhs == doctest::Approx(1.0));
    const double s2 = 2.0 * std::sqrt(2.0);
    CHECK(bound(b, BoundName::Eq1_12).rhs ==
          doctest::Approx(2.0 * std::log(s2 / (1.0 + std::sqrt(2.0)))).epsilon(1e-12));
    CHECK(bound(b, BoundName::Eq1_12).rhs == doctest::Approx(0.316694).epsilon(1e-6));
  }
  SUBCASE("inradius bounds") {
    const auto b = check_bounds(1.0, -0.5, 1.0, kPi / 3, Problem::power_mc(2.0));
    CHECK(bound(b, BoundName::Thm6_1).rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bound(b, BoundName::Thm6_1).slack == doctest::Approx(0.5).epsilon(1e-12));
    const auto c = check_bounds(1.0, -0.5, 1.0, kPi / 3, Problem::constant_forcing(1.0));
    CHECK(bound(c, BoundName::Eq6_11).rhs == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("gating") {
    const auto soliton = check_bounds(1.0, -1.0, 1.0, 1.0, Problem::power_mc(1.0));
    CHECK(soliton.size() == 6);
    for (const auto& c : soliton) {
      CHECK_FALSE(c.applicable);
      CHECK_FALSE(c.holds);
    }
    CHECK_FALSE(bound(check_bounds(1, -1, 1, 1.0, Problem::power_mc(0.5)), BoundName::Thm6_1).applicable);
    CHECK_FALSE(bound(check_bounds(1, -1, 1, 1.6, Problem::power_mc(2.0)), BoundName::Thm6_1).applicable);
    CHECK_FALSE(
        bound(check_bounds(1, -1, 1, 1.6, Problem::constant_forcing(1.0)), BoundName::Eq6_11).applicable);
    const auto cf = check_bounds(1, -1, 1, 1.0, Problem::constant_forcing(1.0));
    CHECK(bound(cf, BoundName::Eq1_11).applicable);
    CHECK_FALSE(bound(cf, BoundName::Eq1_9).applicable);
    // Every bound appears exactly once, in order.
    for (int i = 0; i < 6; ++i) CHECK(static_cast<int>(cf[i].name) == i);
  }
  SUBCASE("tolerance and determinism") {
    CHECK(bound_tolerance(0.2) == 1e-3);
    CHECK(bound_tolerance(-5.0) == doctest::Approx(5e-3));
    const auto edge = check_bounds(1.0 / std::sqrt(2.0) - 0.9e-3, -1, 2.0, 1.0, Problem::power_mc(3.0));
    CHECK(bound(edge, BoundName::Eq1_9).holds);
    const auto over = check_bounds(1.0 / std::sqrt(2.0) - 1.1e-3, -1, 2.0, 1.0, Problem::power_mc(3.0));
    CHECK_FALSE(bound(over, BoundName::Eq1_9).holds);
    const auto x = check_bounds(0.3, -0.2, 1.3, 0.8, Problem::power_mc(2.0));
    const auto y = check_bounds(0.3, -0.2, 1.3, 0.8, Problem::power_mc(2.0));
    for (int i = 0; i < 6; ++i) {
      CHECK(x[i].applicable == y[i].applicable);
      CHECK(x[i].holds == y[i].holds);
      if (x[i].applicable) CHECK(x[i] == y[i]);
    }
  }
  SUBCASE("names round-trip") {
    for (int i = 0; i < 6; ++i) {
      const auto n = static_cast<BoundName>(i);
      CHECK(bound_from_string(to_string(n)) == n);
    }
    CHECK_FALSE(bound_from_string("Eq9_9").has_value());
  }
}

TEST_CASE("the printed q_min lower bound fails on exact disk profiles") {
  // On a disk of radius R the divergence theorem gives
  //   2 pi R q / sqrt(1 + q^2) = int W^-alpha <= pi R^2,
  // so q < 1 whenever R <= 1, while kappa_max^(-2/(alpha+1)) >= 1.
  for (double alpha : {0.5, 2.0, 3.0, 6.0}) {
    for (double R : {0.5, 1.0}) {
      const Problem p = Problem::power_mc(alpha);
      const RadialSolution s = solve_radial(p, R);
      const double q = s.boundary_slope();
      CHECK(q / std::sqrt(1 + q * q) <= R / 2);
      const auto b = check_bounds(q, s.u_min(), 1.0 / R, R, p);
      CHECK_FALSE(bound(b, BoundName::Eq1_9).holds);
      // The form the argument actually yields: 1 + q^2 >= kappa_max^(-2/(alpha+1)).
      CHECK(1 + q * q >= std::pow(1.0 / R, -2.0 / (alpha + 1)));
      // The companion bounds hold with positive slack.
      CHECK(bound(b, BoundName::Eq1_10).slack > 0.0);
      if (alpha > 1.0) CHECK(bound(b, BoundName::Thm6_1).slack > 0.0);
    }
  }
}

TEST_CASE("the inradius bound for constant forcing fails on the exact unit disk profile") {
  const Problem p = Problem::constant_forcing(1.0);
  const RadialSolution s = solve_radial(p, 1.0);
  const auto b = check_bounds(s.boundary_slope(), s.u_min(), 1.0, 1.0, p);
  CHECK(bound(b, BoundName::Eq6_11).slack < -0.03);
  CHECK(bound(b, BoundName::Eq1_11).slack > 0.0);
  CHECK(bound(b, BoundName::Eq1_12).slack > 0.0);
  // Smaller forcing keeps the exact profile inside the bound.
  const RadialSolution t = solve_radial(Problem::constant_forcing(0.5), 1.0);
  CHECK(bound(check_bounds(t.boundary_slope(), t.u_min(), 1.0, 1.0, Problem::constant_forcing(0.5)),
              BoundName::Eq6_11)
            .slack > 0.0);
}

TEST_CASE("mirror symmetry of ellipse solutions") {
  for (const Problem& p : {Problem::power_mc(2.0), Problem::constant_forcing(0.5)}) {
    const auto& run = cached_run("ellipse", ellipse21(), p, 0.05);
    REQUIRE(run.report.mirror_symmetry_defect.has_value());
    CHECK(*run.report.mirror_symmetry_defect <= 1e-8);
  }
  const auto& run = cached_run("disk", unit_disk(), Problem::power_mc(2.0), 0.05);
  CHECK(mirror_symmetry_defect(run.solve.field) <= 1e-8);
}

TEST_CASE("full report") {
  SUBCASE("ellipse alpha = 3") {
    const auto& rep = cached_run("ellipse", ellipse21(), Problem::power_mc(3.0), 0.05).report;
    CHECK(rep.bounds.size() == 6);
    for (const auto& b : rep.bounds) {
      if (b.applicable && b.name != BoundName::Eq1_9) CHECK(b.holds);
    }
    CHECK(rep.critical.count == 1);
    CHECK(rep.interior_negative);
    CHECK(rep.pfunctions.size() == 3);
  }
  SUBCASE("disk mu = 0.5") {
    const auto& rep = cached_run("disk", unit_disk(), Problem::constant_forcing(0.5), 0.05).report;
    CHECK(rep.critical.count == 1);
    CHECK(rep.critical.z_theta_zero_counts.size() == 8);
    for (const auto& z : rep.critical.z_theta_zero_counts) CHECK(z.count == 2);
    CHECK(rep.all_ok());
    for (const auto& pf : rep.pfunctions) {
      if (pf.beta == 2.0) CHECK(pf.argmax_to_critical <= 2 * rep.h);
    }
  }
  SUBCASE("soliton gating") {
    const auto& rep = cached_run("disk", unit_disk(), Problem::power_mc(1.0), 0.05).report;
    CHECK(rep.pfunctions.empty());
    CHECK(std::find(rep.notes.begin(), rep.notes.end(), "Phi skipped: alpha = 1") != rep.notes.end());
    CHECK_FALSE(bound(rep.bounds, BoundName::Eq1_9).applicable);
    CHECK_FALSE(bound(rep.bounds, BoundName::Eq1_10).applicable);
  }
  SUBCASE("beta outside [1, 2] is reported, not asserted") {
    const auto rep = full_report(unit_disk(), Problem::power_mc(2.0), 0.1, {3.0});
    REQUIRE(rep.pfunctions.size() == 1);
    CHECK_FALSE(rep.pfunctions.front().asserted);
    CHECK(rep.notes.size() == 1);
  }
}
