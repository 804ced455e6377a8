#include <doctest.h>

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "mcflow/errors.hpp"
#include "mcflow/radial.hpp"

using namespace mcflow;

namespace {

// Adaptive Dormand-Prince on (p, U) with U' = p, started from the
// third-order series p = c r + c3 r^3 at r = 1e-6.
std::array<double, 2> odeint_oracle(const Problem& pr, double R) {
  using State = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  const double c = pr.is_power() ? 0.5 : 0.5 * (1.0 + pr.mu());
  const double r0 = 1e-6;
  State x{c * r0, 0.5 * c * r0 * r0};
  auto rhs = [&](const State& s, State& ds, double r) {
    ds[0] = slope_ode_rhs(pr, r, s[0]);
    ds[1] = s[0];
  };
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>()), rhs,
                          x, r0, R, 1e-4);
  return {x[0], -x[1]};  // p(R), u(0)
}

}  // namespace

TEST_CASE("slope ODE right-hand side") {
  CHECK(slope_ode_rhs(Problem::power_mc(3.0), 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(slope_ode_rhs(Problem::constant_forcing(1.0), 1.0, 0.0) == doctest::Approx(2.0));
  CHECK(slope_ode_rhs(Problem::power_mc(1.0), 2.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(slope_ode_rhs(Problem::power_mc(1.0), 0.0, 0.0), InvalidArgument);
}

TEST_CASE("series start from the center Laplacian") {
  for (double alpha : {0.5, 1.0, 2.0, 7.0}) CHECK(series_start(Problem::power_mc(alpha)) == 0.5);
  CHECK(series_start(Problem::constant_forcing(1.0)) == 1.0);
  CHECK(series_start(Problem::constant_forcing(1e-12)) == doctest::Approx(0.5));
}

TEST_CASE("radial solution invariants") {
  for (const Problem& p : {Problem::power_mc(1.0), Problem::power_mc(3.0),
                           Problem::constant_forcing(1.0)}) {
    const RadialSolution s = solve_radial(p, 1.0);
    CHECK(s.p.front() == 0.0);
    for (std::size_t i = 1; i < s.p.size(); ++i) CHECK(s.p[i] > 0.0);
    CHECK(s.u.back() == 0.0);
    CHECK(s.u_min() == s.u.front());
    CHECK(s.u_min() < 0.0);
    CHECK(s.r.back() == 1.0);
    // u(r) = -int_r^R p, against adaptive quadrature of the interpolant.
    for (double r : {0.0, 0.3, 0.77}) {
      const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double x) { return s.p_at(x); }, r, 1.0, 15, 1e-13);
      CHECK(std::abs(s.u_at(r) + integral) <= 1e-10);
    }
  }
}

TEST_CASE("radial oracle agrees with an independent adaptive integrator") {
  for (const Problem& p : {Problem::power_mc(1.0), Problem::power_mc(2.0), Problem::power_mc(3.0),
                           Problem::constant_forcing(0.5), Problem::constant_forcing(1.0)}) {
    for (double R : {0.5, 1.0}) {
      const RadialSolution s = solve_radial(p, R);
      const auto [q, umin] = odeint_oracle(p, R);
      INFO(p.name() << " R=" << R);
      CHECK(std::abs(s.boundary_slope() - q) <= 1e-9);
      CHECK(std::abs(s.u_min() - umin) <= 1e-9);
    }
  }
}

TEST_CASE("step halving changes the soliton fixture by at most 1e-10") {
  const Problem p = Problem::power_mc(1.0);
  const RadialSolution a = solve_radial(p, 1.0, 10000);
  const RadialSolution b = solve_radial(p, 1.0, 20000);
  CHECK(std::abs(a.u_min() - b.u_min()) <= 1e-10);
  CHECK(std::abs(a.boundary_slope() - b.boundary_slope()) <= 1e-10);
}

TEST_CASE("radial values respect the bounds that hold on the disk") {
  SUBCASE("boundary slope for mu = 1 is at least (1+mu)/(2 kappa_max) = 1") {
    CHECK(solve_radial(Problem::constant_forcing(1.0), 1.0).boundary_slope() >= 1.0);
  }
  SUBCASE("alpha = 3 minimum against the inradius bound") {
    const double rhs = (std::pow(1.0 / std::cos(1.0), 2) - 1.0) / 2.0;
    CHECK(rhs == doctest::Approx(1.2128).epsilon(1e-4));
    CHECK(-solve_radial(Problem::power_mc(3.0), 1.0).u_min() <= rhs);
  }
}

TEST_CASE("slope blow-up and argument checks") {
  CHECK_THROWS_AS(solve_radial(Problem::constant_forcing(50.0), 3.0), SlopeBlowup);
  CHECK_THROWS_AS(solve_radial(Problem::power_mc(2.0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(solve_radial(Problem::power_mc(2.0), 1.0, 50), InvalidArgument);
}
