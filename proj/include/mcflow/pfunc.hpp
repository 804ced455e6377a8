#pragma once

// P-functions of a solution:
//
//   Phi(x; beta) = 2/(alpha-1) (1 + |grad u|^2)^((alpha-1)/2) - beta u
//   Psi(x; beta) = ln( (1 + |grad v|^2) / (1 + mu sqrt(1 + |grad v|^2))^2 ) - beta v
//
// For beta in [1, 2] both attain their minimum over the closure on the
// boundary.

#include <string>
#include <vector>

#include "mcflow/gradient.hpp"
#include "mcflow/problem.hpp"

namespace mcflow {

/// Throws AlphaOne at alpha == 1.
double phi(double alpha, double beta, double u, const Vec2& grad);
/// Requires mu >= 0.
double psi(double mu, double beta, double v, const Vec2& grad);

enum class PKind { Phi, Psi };

std::string to_string(PKind kind);

struct PFunctionField {
  double beta = 0.0;
  PKind kind = PKind::Phi;
  std::vector<double> values;
  int argmin_vertex = -1;
  int argmax_vertex = -1;
  double boundary_min = 0.0;
  double interior_min = 0.0;
  bool min_on_boundary = false;

  double range() const;
};

/// Relative tolerance on the field range for the boundary-minimum test.
inline constexpr double kBoundaryMinTolerance = 1e-3;

/// Vertexwise evaluation with GradientField::gradient. `param` is alpha for
/// Phi and mu for Psi.
PFunctionField evaluate_field(const ScalarField& field, const GradientField& grads, PKind kind,
                              double param, double beta);

/// Phi for PowerMC, Psi for ConstantForcing. Throws AlphaOne for alpha == 1.
PFunctionField evaluate_field(const ScalarField& field, const GradientField& grads,
                              const Problem& problem, double beta);

}  // namespace mcflow
