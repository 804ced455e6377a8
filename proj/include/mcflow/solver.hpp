#pragma once

// Damped Newton solver for the P1 Galerkin discretization of
//
//   div( grad u / W ) = g(W)  in the domain,   u = 0 on the boundary,
//
// with W = sqrt(1 + |grad u|^2). Weak residual per interior vertex i:
//
//   R_i = sum_T |T| (grad u . grad phi_i) / W  +  sum_T |T|/3 g(W)
//
// (vertex-lumped quadrature on the forcing term). A solution has R = 0.

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mcflow/errors.hpp"
#include "mcflow/mesh.hpp"
#include "mcflow/problem.hpp"

namespace mcflow {

/// Nodal values on a mesh; boundary entries are exactly zero.
struct ScalarField {
  std::shared_ptr<const Mesh> mesh;
  Eigen::VectorXd values;

  double min() const { return values.minCoeff(); }
};

struct SolveOptions {
  double residual_tol = 1e-10;
  int max_iters = 50;
  int max_halvings = 20;
  int continuation_steps = 1;
};

struct SolveResult {
  ScalarField field;
  std::vector<NewtonStep> log;
  int iterations = 0;
  double final_residual = 0.0;
};

/// Residual over interior vertices (indexed by Mesh::interior_index).
Eigen::VectorXd residual(const Mesh& mesh, const Eigen::VectorXd& values, const Problem& problem);

/// Exact derivative of residual() with respect to interior nodal values.
Eigen::SparseMatrix<double> jacobian(const Mesh& mesh, const Eigen::VectorXd& values,
                                     const Problem& problem);

/// Solves from u = 0, optionally ramping alpha or mu from 0 in
/// continuation_steps stages. Throws NonConvergence or SignViolation.
SolveResult newton_solve(std::shared_ptr<const Mesh> mesh, const Problem& problem,
                         const SolveOptions& opts = {});

/// Lifts interior values to a full nodal vector with zero boundary values.
Eigen::VectorXd with_boundary(const Mesh& mesh, const Eigen::VectorXd& interior);

}  // namespace mcflow
