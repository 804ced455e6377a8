#pragma once

#include <memory>
#include <vector>

#include "mcflow/mesh.hpp"
#include "mcflow/solver.hpp"

namespace mcflow {

/// How boundary normal derivatives are estimated.
///
/// NormalLine: quadratic through P1-interpolated values at depths
/// {0, delta, 2 delta} along the inward normal, delta = h by default.
///
/// Patch: least-squares polynomial through the nodal values within a radius
/// of the boundary vertex, in osculating-circle coordinates (arc s, depth d),
/// cubic in s and quartic in d. The default radius is
/// min(2 sqrt(h l), l/2) with l the radius of the disk of equal area.
/// Nodal values avoid the O(h^2) jumps of P1 interpolation, and the sqrt(h)
/// radius keeps second derivatives convergent.
enum class BoundaryFit { NormalLine, Patch };

/// How interior vertex gradients are recovered.
///
/// Average: area-weighted mean of the incident triangle gradients.
/// Patch: gradient at the vertex of the least-squares quadratic through the
/// nodal values within kInteriorPatchRadius * h; falls back to Average when
/// the patch is too small.
enum class InteriorFit { Average, Patch };

inline constexpr double kInteriorPatchRadius = 2.2;

struct GradientOptions {
  BoundaryFit method = BoundaryFit::Patch;
  InteriorFit interior = InteriorFit::Patch;
  /// delta for NormalLine, radius for Patch; 0 selects the default.
  double scale = 0.0;
};

/// Gradients of a P1 field.
///
/// Interior vertices carry the recovered gradient (see InteriorFit). Boundary vertices also carry the outward normal derivative u_n
/// and the second normal derivative u_nn.
struct GradientField {
  std::shared_ptr<const Mesh> mesh;
  std::vector<Vec2> triangle_gradients;
  std::vector<Vec2> vertex_gradients;
  std::vector<double> normal_derivative;         // per boundary index
  std::vector<double> normal_second_derivative;  // per boundary index
  double fit_scale = 0.0;

  /// u_n * n on the boundary (the tangential derivative vanishes on the zero
  /// level set), the recovered vertex gradient elsewhere.
  Vec2 gradient(int v) const;
  double gradient_norm(int v) const { return gradient(v).norm(); }
  /// W = sqrt(1 + |grad u|^2).
  double slope_factor(int v) const;
  /// min over boundary vertices of |u_n|.
  double boundary_gradient_min() const;
};

/// If the fit at some boundary vertex cannot be formed (a normal sample
/// leaves the mesh, or the patch is too small) the scale is halved once,
/// after which InterpolationOutsideDomain is thrown.
GradientField recover_gradient(const ScalarField& field, const GradientOptions& opts = {});

/// Per-triangle P1 gradients of arbitrary nodal values.
std::vector<Vec2> triangle_gradients(const Mesh& mesh, const Eigen::VectorXd& values);

}  // namespace mcflow
