#include "mcflow/gradient.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/QR>

#include "mcflow/errors.hpp"

namespace mcflow {

std::vector<Vec2> triangle_gradients(const Mesh& mesh, const Eigen::VectorXd& values) {
  if (values.size() != mesh.num_vertices()) {
    throw InvalidArgument("field size does not match the mesh vertex count");
  }
  std::vector<Vec2> out(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& d = mesh.shape_gradients(t);
    out[t] = values[tri[0]] * d[0] + values[tri[1]] * d[1] + values[tri[2]] * d[2];
  }
  return out;
}

Vec2 GradientField::gradient(int v) const {
  if (v < 0 || v >= mesh->num_vertices()) throw UnknownVertex(v);
  if (mesh->is_boundary(v)) return normal_derivative[v] * mesh->boundary_point(v).outward_normal;
  return vertex_gradients[v];
}

double GradientField::slope_factor(int v) const {
  return std::sqrt(1.0 + gradient(v).squaredNorm());
}

double GradientField::boundary_gradient_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double un : normal_derivative) m = std::min(m, std::abs(un));
  return m;
}

namespace {

struct NormalFit {
  double un;
  double unn;
};

std::optional<NormalFit> fit_normal_line(const Mesh& mesh, std::span<const double> u, int b,
                                         double delta) {
  const Vec2 x0 = mesh.vertices()[b];
  const Vec2 n = mesh.boundary_point(b).outward_normal;
  const auto f1 = mesh.interpolate(u, x0 - delta * n);
  const auto f2 = mesh.interpolate(u, x0 - 2.0 * delta * n);
  if (!f1 || !f2) return std::nullopt;
  const double f0 = u[b];
  // Samples run inward; u_n is the outward derivative.
  const double inward = (-3.0 * f0 + 4.0 * *f1 - *f2) / (2.0 * delta);
  return NormalFit{-inward, (f0 - 2.0 * *f1 + *f2) / (delta * delta)};
}

std::optional<NormalFit> fit_patch(const Mesh& mesh, std::span<const double> u, int b,
                                   double radius) {
  constexpr int ns = 4;  // powers of s: 0..3
  constexpr int nd = 5;  // powers of d: 0..4
  constexpr int nc = ns * nd;

  const auto& bp = mesh.boundary_point(b);
  const Vec2 x0 = mesh.vertices()[b];
  const double rho = 1.0 / bp.curvature;
  const Vec2 e0 = bp.outward_normal;
  const Vec2 e1(-e0.y(), e0.x());
  const Vec2 center = x0 - rho * e0;

  std::vector<int> patch{b};
  std::vector<char> seen(mesh.num_vertices(), 0);
  seen[b] = 1;
  for (std::size_t head = 0; head < patch.size(); ++head) {
    for (int w : mesh.vertex_neighbors(patch[head])) {
      if (seen[w]) continue;
      seen[w] = 1;
      if ((mesh.vertices()[w] - x0).norm() <= radius) patch.push_back(w);
    }
  }
  if (static_cast<int>(patch.size()) < 2 * nc) return std::nullopt;

  Eigen::MatrixXd A(patch.size(), nc);
  Eigen::VectorXd f(patch.size());
  for (std::size_t r = 0; r < patch.size(); ++r) {
    const Vec2 q = mesh.vertices()[patch[r]] - center;
    const double d = (rho - q.norm()) / radius;
    const double s = rho * std::atan2(q.dot(e1), q.dot(e0)) / radius;
    double sp = 1.0;
    for (int i = 0; i < ns; ++i, sp *= s) {
      double dp = 1.0;
      for (int j = 0; j < nd; ++j, dp *= d) A(r, i * nd + j) = sp * dp;
    }
    f[r] = u[patch[r]];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(f);
  // Depth d runs inward, so u_n = -du/dd.
  return NormalFit{-c[1] / radius, 2.0 * c[2] / (radius * radius)};
}

// Gradient at vertex v of the least-squares polynomial (total degree
// `degree`) through nodal values within `radius`.
std::optional<Vec2> fit_vertex_gradient(const Mesh& mesh, std::span<const double> u, int v,
                                        double radius, int degree) {
  const Vec2 x0 = mesh.vertices()[v];
  std::vector<int> patch{v};
  std::vector<char> seen(mesh.num_vertices(), 0);
  seen[v] = 1;
  for (std::size_t head = 0; head < patch.size(); ++head) {
    for (int w : mesh.vertex_neighbors(patch[head])) {
      if (seen[w]) continue;
      seen[w] = 1;
      if ((mesh.vertices()[w] - x0).norm() <= radius) patch.push_back(w);
    }
  }
  const int nc = (degree + 1) * (degree + 2) / 2;
  if (static_cast<int>(patch.size()) < nc + nc / 2) return std::nullopt;
  Eigen::MatrixXd A(patch.size(), nc);
  Eigen::VectorXd f(patch.size());
  for (std::size_t r = 0; r < patch.size(); ++r) {
    const Vec2 d = (mesh.vertices()[patch[r]] - x0) / radius;
    int c = 0;
    for (int total = 0; total <= degree; ++total) {
      for (int j = 0; j <= total; ++j) A(r, c++) = std::pow(d.x(), total - j) * std::pow(d.y(), j);
    }
    f[r] = u[patch[r]];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(f);
  // Columns 1 and 2 are x and y.
  return Vec2(c[1], c[2]) / radius;
}

}  // namespace

GradientField recover_gradient(const ScalarField& field, const GradientOptions& opts) {
  if (!field.mesh) throw InvalidArgument("field has no mesh");
  if (opts.scale < 0.0) throw InvalidArgument("fit scale must be non-negative");
  const Mesh& mesh = *field.mesh;
  GradientField g;
  g.mesh = field.mesh;
  g.triangle_gradients = triangle_gradients(mesh, field.values);

  g.vertex_gradients.assign(mesh.num_vertices(), Vec2::Zero());
  std::vector<double> weight(mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double A = mesh.area(t);
    for (int v : mesh.triangles()[t]) {
      g.vertex_gradients[v] += A * g.triangle_gradients[t];
      weight[v] += A;
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (weight[v] > 0.0) g.vertex_gradients[v] /= weight[v];
  }

  if (opts.interior == InteriorFit::Patch) {
    const double rad = kInteriorPatchRadius * mesh.h();
    const std::span<const double> uu(field.values.data(), field.values.size());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (mesh.is_boundary(v)) continue;
      if (auto gv = fit_vertex_gradient(mesh, uu, v, rad, 2)) g.vertex_gradients[v] = *gv;
    }
  }

  double scale = opts.scale;
  if (scale == 0.0) {
    if (opts.method == BoundaryFit::NormalLine) {
      scale = mesh.h();
    } else {
      const double l = std::sqrt(mesh.total_area() / std::numbers::pi);
      scale = std::min(2.0 * std::sqrt(mesh.h() * l), 0.5 * l);
    }
  }
  g.fit_scale = scale;

  const std::span<const double> u(field.values.data(), field.values.size());
  auto fit = [&](int b, double s) {
    return opts.method == BoundaryFit::NormalLine ? fit_normal_line(mesh, u, b, s)
                                                  : fit_patch(mesh, u, b, s);
  };
  g.normal_derivative.resize(mesh.num_boundary());
  g.normal_second_derivative.resize(mesh.num_boundary());
  for (int b = 0; b < mesh.num_boundary(); ++b) {
    auto r = fit(b, scale);
    if (!r) r = fit(b, 0.5 * scale);
    if (!r) {
      throw InterpolationOutsideDomain("boundary fit leaves the mesh at boundary vertex " +
                                       std::to_string(b));
    }
    g.normal_derivative[b] = r->un;
    g.normal_second_derivative[b] = r->unn;
  }
  return g;
}

}  // namespace mcflow
