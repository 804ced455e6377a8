#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/ellint_2.hpp>

#include "mcflow/errors.hpp"
#include "mcflow/geometry.hpp"
#include "support.hpp"

using namespace mcflow;
using mcflow::testing::ellipse21;
using mcflow::testing::fourier_circle;
using mcflow::testing::unit_disk;

namespace {

constexpr double kPi = std::numbers::pi;

// Curvature of the polar curve r(t) = 1 + 0.1 cos 2t.
double polar_curvature(double t) {
  const double r = 1.0 + 0.1 * std::cos(2 * t);
  const double r1 = -0.2 * std::sin(2 * t);
  const double r2 = -0.4 * std::cos(2 * t);
  return (r * r + 2 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
}

}  // namespace

TEST_CASE("ellipse curvature matches the closed form") {
  const Domain e = ellipse21();
  CHECK(curvature(e, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(curvature(e, kPi / 2) == doctest::Approx(0.25).epsilon(1e-12));
  for (double t : {0.0, 0.7, 2.0, 4.5}) {
    CHECK(curvature(unit_disk(), t) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("fourier curvature agrees with the polar formula") {
  const Domain f = fourier_circle();
  for (double t = 0.0; t < 2 * kPi; t += 0.37) {
    CHECK(f.curvature(t) == doctest::Approx(polar_curvature(t)).epsilon(1e-12));
  }
}

TEST_CASE("kappa_max") {
  CHECK(kappa_max(ellipse21()) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(kappa_max(unit_disk()) == doctest::Approx(1.0).epsilon(1e-8));

  double brute = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) brute = std::max(brute, polar_curvature(2 * kPi * i / n));
  CHECK(std::abs(kappa_max(fourier_circle()) - brute) <= 1e-8 * brute);

  CHECK_THROWS_AS(kappa_max(unit_disk(), 32), InvalidDomain);
}

TEST_CASE("kappa_max and inradius under scaling") {
  for (const Domain& d : {ellipse21(), fourier_circle()}) {
    for (double lambda : {0.5, 2.0}) {
      const Domain s = d.scaled(lambda);
      CHECK(kappa_max(s) == doctest::Approx(kappa_max(d) / lambda).epsilon(1e-8));
      CHECK(std::abs(inradius(s) - lambda * inradius(d)) <= 1e-6);
    }
  }
}

TEST_CASE("inradius") {
  CHECK(std::abs(inradius(ellipse21()) - 1.0) <= 1e-6 * 4.0);
  CHECK(std::abs(inradius(unit_disk()) - 1.0) <= 1e-6 * 2.0);
  for (const Domain& d : {ellipse21(), fourier_circle(), unit_disk()}) {
    CHECK(inradius(d) >= 1.0 / kappa_max(d) - 1e-6);
  }
  // r(t) = 1 + 0.1 cos 2t: the nearest boundary points from the center sit
  // at t = pi/2, 3pi/2 with r = 0.9, and the center is optimal by symmetry.
  CHECK(inradius(fourier_circle()) == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("boundary_sample") {
  SUBCASE("unit disk quarter points") {
    const auto pts = boundary_sample(unit_disk(), 4);
    const Vec2 expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < 4; ++i) CHECK((pts[i].position - expected[i]).norm() <= 1e-9);
  }
  SUBCASE("ellipse perimeter against the complete elliptic integral") {
    const Domain e = ellipse21();
    const double k = std::sqrt(1.0 - 0.25);
    const double exact = 4.0 * 2.0 * boost::math::ellint_2(k);
    CHECK(std::abs(e.perimeter() - exact) <= 1e-6);
    const auto pts = boundary_sample(e, 256);
    double total = 0.0;
    for (int i = 0; i < 256; ++i) {
      const double next = i + 1 < 256 ? pts[i + 1].arclength : e.perimeter();
      const double ds = next - pts[i].arclength;
      CHECK(ds == doctest::Approx(exact / 256).epsilon(1e-8));
      total += ds;
    }
    CHECK(std::abs(total - exact) <= 1e-6);
  }
  SUBCASE("normals are unit, outward and orthogonal to the tangent") {
    for (const Domain& d : {ellipse21(), fourier_circle()}) {
      for (const auto& bp : boundary_sample(d, 64)) {
        CHECK(std::abs(bp.outward_normal.norm() - 1.0) <= 1e-12);
        CHECK(bp.outward_normal.dot(bp.position - d.centroid()) > 0.0);
        const Vec2 tangent = d.velocity(bp.t).normalized();
        CHECK(std::abs(bp.outward_normal.dot(tangent)) <= 1e-10);
        CHECK(bp.curvature > 0.0);
      }
    }
  }
}

TEST_CASE("contains") {
  CHECK(contains(unit_disk(), Vec2(0, 0)));
  CHECK_FALSE(contains(unit_disk(), Vec2(2, 0)));
  CHECK(contains(ellipse21(), Vec2(1.99, 0)));
}

TEST_CASE("curvature is positive on a dense sample") {
  for (const Domain& d : {ellipse21(), fourier_circle(), Domain::ellipse(3.0, 0.5)}) {
    double kmin = INFINITY;
    for (int i = 0; i < 10000; ++i) kmin = std::min(kmin, d.curvature(2 * kPi * i / 10000));
    CHECK(kmin > 0.0);
  }
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(Domain::ellipse(0.0, 1.0), InvalidDomain);
  CHECK_THROWS_AS(Domain::fourier(1.0, {{3, 0.2, 0.0}}), NonConvex);
  CHECK_THROWS_AS(Domain::fourier(-1.0, {}), InvalidDomain);
}

TEST_CASE("mirror symmetry flags") {
  CHECK(ellipse21().mirror_symmetric());
  CHECK(fourier_circle().mirror_symmetric());
  CHECK_FALSE(Domain::fourier(1.0, {{2, 0.0, 0.1}}).mirror_symmetric());
}
