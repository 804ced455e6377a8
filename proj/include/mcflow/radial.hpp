#pragma once

// Radially symmetric solutions on a disk of radius R. With p = u_r the
// equations reduce to a first-order ODE in p alone:
//
//   PowerMC:          p' = (1+p^2)^((3-alpha)/2)           - p(1+p^2)/r
//   ConstantForcing:  p' = (1+p^2) + mu (1+p^2)^(3/2)      - p(1+p^2)/r
//
// p is integrated outward, then u is recovered from u(R) = 0.

#include <vector>

#include "mcflow/problem.hpp"

namespace mcflow {

double slope_ode_rhs(const Problem& problem, double r, double p);

/// p'(0): half the Laplacian at the center (1/2, or (1+mu)/2).
double series_start(const Problem& problem);

struct RadialSolution {
  double R = 0.0;
  Problem problem = Problem::power_mc(1.0);
  std::vector<double> r;   // 0, r0, r0 + dr, ..., R
  std::vector<double> p;   // u_r
  std::vector<double> dp;  // u_rr from the ODE (series value at r = 0)
  std::vector<double> u;   // u(R) = 0

  double u_min() const { return u.front(); }
  double boundary_slope() const { return p.back(); }
  /// Cubic Hermite interpolation of u at radius s in [0, R].
  double u_at(double s) const;
  double p_at(double s) const;
};

/// Series start on [0, 1e-4 R], then n fixed RK4 steps to R.
/// Throws SlopeBlowup if p exceeds 1e8.
RadialSolution solve_radial(const Problem& problem, double R, int n = 10000);

}  // namespace mcflow
