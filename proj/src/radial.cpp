#include "mcflow/radial.hpp"

#include <algorithm>
#include <cmath>

#include "mcflow/errors.hpp"

namespace mcflow {

double slope_ode_rhs(const Problem& problem, double r, double p) {
  if (!(r > 0.0)) throw InvalidArgument("slope_ode_rhs needs r > 0");
  const double w2 = 1.0 + p * p;
  const double drag = p * w2 / r;
  if (problem.is_power()) return std::pow(w2, 0.5 * (3.0 - problem.alpha())) - drag;
  return w2 + problem.mu() * w2 * std::sqrt(w2) - drag;
}

double series_start(const Problem& problem) {
  // Laplacian at the center equals g(1): u_rr(0) = g(1)/2.
  return problem.is_power() ? 0.5 : 0.5 * (1.0 + problem.mu());
}

namespace {

// Hermite cubic on [a, b] with values f and slopes df.
double hermite(double a, double b, double fa, double fb, double da, double db, double x) {
  const double h = b - a;
  const double s = (x - a) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * fa + h10 * h * da + h01 * fb + h11 * h * db;
}

}  // namespace

RadialSolution solve_radial(const Problem& problem, double R, int n) {
  if (!(R > 0.0)) throw InvalidArgument("disk radius must be positive");
  if (n < 100) throw InvalidArgument("radial grid needs at least 100 steps");

  RadialSolution sol;
  sol.R = R;
  sol.problem = problem;
  const double c = series_start(problem);
  const double r0 = 1e-4 * R;
  const double dr = (R - r0) / n;

  sol.r.reserve(n + 2);
  sol.p.reserve(n + 2);
  sol.r.push_back(0.0);
  sol.p.push_back(0.0);
  sol.r.push_back(r0);
  sol.p.push_back(c * r0);

  double p = c * r0;
  for (int k = 0; k < n; ++k) {
    const double r = r0 + k * dr;
    const double k1 = slope_ode_rhs(problem, r, p);
    const double k2 = slope_ode_rhs(problem, r + 0.5 * dr, p + 0.5 * dr * k1);
    const double k3 = slope_ode_rhs(problem, r + 0.5 * dr, p + 0.5 * dr * k2);
    const double k4 = slope_ode_rhs(problem, r + dr, p + dr * k3);
    p += dr * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (!std::isfinite(p) || std::abs(p) > 1e8) throw SlopeBlowup(r + dr);
    sol.r.push_back(k + 1 == n ? R : r0 + (k + 1) * dr);
    sol.p.push_back(p);
  }

  const std::size_t m = sol.r.size();
  sol.dp.resize(m);
  sol.dp[0] = c;
  for (std::size_t i = 1; i < m; ++i) sol.dp[i] = slope_ode_rhs(problem, sol.r[i], sol.p[i]);

  // u(r_i) = -int_{r_i}^R p, panel by panel with the end-corrected trapezoid
  // rule h/2 (p_a + p_b) + h^2/12 (p'_a - p'_b).
  sol.u.assign(m, 0.0);
  for (std::size_t i = m - 1; i-- > 0;) {
    const double h = sol.r[i + 1] - sol.r[i];
    const double panel =
        0.5 * h * (sol.p[i] + sol.p[i + 1]) + h * h / 12.0 * (sol.dp[i] - sol.dp[i + 1]);
    sol.u[i] = sol.u[i + 1] - panel;
  }
  return sol;
}

double RadialSolution::u_at(double s) const {
  s = std::clamp(s, 0.0, R);
  auto it = std::upper_bound(r.begin(), r.end(), s);
  std::size_t i = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
  i = std::min(i, r.size() - 2);
  return hermite(r[i], r[i + 1], u[i], u[i + 1], p[i], p[i + 1], s);
}

double RadialSolution::p_at(double s) const {
  s = std::clamp(s, 0.0, R);
  auto it = std::upper_bound(r.begin(), r.end(), s);
  std::size_t i = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
  i = std::min(i, r.size() - 2);
  return hermite(r[i], r[i + 1], p[i], p[i + 1], dp[i], dp[i + 1], s);
}

}  // namespace mcflow
