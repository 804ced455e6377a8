#include "mcflow/pfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcflow/errors.hpp"

namespace mcflow {

double phi(double alpha, double beta, double u, const Vec2& grad) {
  if (alpha == 1.0) throw AlphaOne();
  const double w2 = 1.0 + grad.squaredNorm();
  return 2.0 / (alpha - 1.0) * std::pow(w2, 0.5 * (alpha - 1.0)) - beta * u;
}

double psi(double mu, double beta, double v, const Vec2& grad) {
  if (!(mu >= 0.0)) throw InvalidArgument("psi needs mu >= 0");
  const double w2 = 1.0 + grad.squaredNorm();
  const double denom = 1.0 + mu * std::sqrt(w2);
  return std::log(w2 / (denom * denom)) - beta * v;
}

std::string to_string(PKind kind) { return kind == PKind::Phi ? "Phi" : "Psi"; }

double PFunctionField::range() const {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

PFunctionField evaluate_field(const ScalarField& field, const GradientField& grads, PKind kind,
                              double param, double beta) {
  if (!field.mesh || field.mesh != grads.mesh) {
    throw InvalidArgument("field and gradients must share a mesh");
  }
  if (kind == PKind::Phi && param == 1.0) throw AlphaOne();
  const Mesh& mesh = *field.mesh;
  PFunctionField out;
  out.beta = beta;
  out.kind = kind;
  out.values.resize(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2 g = grads.gradient(v);
    const double u = field.values[v];
    out.values[v] = kind == PKind::Phi ? phi(param, beta, u, g) : psi(param, beta, u, g);
  }

  const auto& vals = out.values;
  out.argmin_vertex = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  out.argmax_vertex = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  out.boundary_min = std::numeric_limits<double>::infinity();
  out.interior_min = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    double& m = mesh.is_boundary(v) ? out.boundary_min : out.interior_min;
    m = std::min(m, vals[v]);
  }
  out.min_on_boundary = mesh.is_boundary(out.argmin_vertex) ||
                        out.interior_min >= out.boundary_min - kBoundaryMinTolerance * out.range();
  return out;
}

PFunctionField evaluate_field(const ScalarField& field, const GradientField& grads,
                              const Problem& problem, double beta) {
  if (problem.is_power()) return evaluate_field(field, grads, PKind::Phi, problem.alpha(), beta);
  return evaluate_field(field, grads, PKind::Psi, problem.mu(), beta);
}

}  // namespace mcflow
