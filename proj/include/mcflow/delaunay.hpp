#pragma once

#include <array>
#include <span>
#include <vector>

#include "mcflow/geometry.hpp"

namespace mcflow {

using Triangle = std::array<int, 3>;

/// Twice the signed area of (a, b, c); positive for counterclockwise order.
double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

/// Positive when d lies strictly inside the circumcircle of the
/// counterclockwise triangle (a, b, c).
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// Delaunay triangulation of distinct points (Bowyer-Watson). Returned
/// triangles index into `points` and are counterclockwise. Cocircular ties
/// are resolved by insertion order.
std::vector<Triangle> delaunay_triangulate(std::span<const Vec2> points);

}  // namespace mcflow
