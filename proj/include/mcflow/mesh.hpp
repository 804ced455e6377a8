#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcflow/delaunay.hpp"
#include "mcflow/geometry.hpp"

namespace mcflow {

/// Triangle hit by a point query together with barycentric weights.
struct MeshLocation {
  int triangle = -1;
  std::array<double, 3> weights{};
};

/// Conforming P1 triangulation of a domain.
///
/// Boundary vertices carry ids 0..n_boundary-1 in counterclockwise order
/// along the curve; interior vertices follow. Per-triangle areas and basis
/// function gradients are precomputed.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
       std::vector<BoundaryPoint> boundary, double h);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  double h() const { return h_; }

  int num_boundary() const { return static_cast<int>(boundary_.size()); }
  int num_interior() const { return num_vertices() - num_boundary(); }
  /// Boundary vertex ids, counterclockwise, monotone in arclength.
  const std::vector<int>& boundary_vertex_ids() const { return boundary_ids_; }
  bool is_boundary(int v) const { return v < num_boundary(); }
  /// Index into the interior unknown vector, -1 for boundary vertices.
  int interior_index(int v) const { return is_boundary(v) ? -1 : v - num_boundary(); }
  int vertex_of_interior(int k) const { return k + num_boundary(); }
  const BoundaryPoint& boundary_point(int boundary_index) const {
    return boundary_[boundary_index];
  }
  /// Arclength parameter of a boundary vertex.
  double arclength(int v) const;

  double area(int t) const { return areas_[t]; }
  /// Gradients of the three P1 basis functions on triangle t.
  const std::array<Vec2, 3>& shape_gradients(int t) const { return grads_[t]; }
  double lumped_mass(int v) const { return lumped_[v]; }
  double total_area() const;
  double min_angle_degrees() const;

  /// Sorted adjacency list; throws UnknownVertex for out-of-range ids.
  const std::vector<int>& vertex_neighbors(int v) const;
  /// Triangles incident to v.
  const std::vector<int>& vertex_triangles(int v) const { return vertex_tris_.at(v); }

  std::optional<MeshLocation> locate(const Vec2& p) const;
  /// Piecewise-linear interpolation of nodal values; nullopt outside the mesh.
  std::optional<double> interpolate(std::span<const double> values, const Vec2& p) const;

  long num_edges() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryPoint> boundary_;
  std::vector<int> boundary_ids_;
  double h_;
  std::vector<double> areas_;
  std::vector<std::array<Vec2, 3>> grads_;
  std::vector<double> lumped_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> vertex_tris_;

  // Uniform bucket grid for point location.
  Vec2 grid_lo_ = Vec2::Zero();
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;

  void build_locator();
};

/// Result of a structural validation of a mesh.
struct MeshCheck {
  bool positively_oriented = true;
  bool conforming = true;
  bool boundary_on_curve = true;
  bool interior_inside = true;
  double min_angle_degrees = 0.0;
  std::string detail;

  bool ok(double min_angle = 20.0) const {
    return positively_oriented && conforming && boundary_on_curve && interior_inside &&
           min_angle_degrees >= min_angle;
  }
};

MeshCheck check_mesh(const Mesh& mesh, const Domain& domain);

/// Boundary nodes at spacing ~h, interior triangular lattice of pitch h kept
/// at distance > h/2 from the curve, Delaunay triangulation of the union.
/// For mirror-symmetric domains the mesh is exactly symmetric about both axes.
/// Throws MeshQualityFailure if the minimum angle stays below 20 degrees.
Mesh triangulate(const Domain& domain, double h);

}  // namespace mcflow
