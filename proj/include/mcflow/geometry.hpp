#pragma once

// Strictly convex planar domains given by a closed counterclockwise curve.
//
// Curvature convention: for the counterclockwise parametrization
//   kappa = (x' y'' - y' x'') / |c'|^3,
// which is positive for convex curves. This coincides with the curvature
// taken with respect to the inward normal, and is used everywhere.

#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace mcflow {

using Vec2 = Eigen::Vector2d;

struct Ellipse {
  double a = 1.0;
  double b = 1.0;
};

struct Harmonic {
  int k = 0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// r(t) = r0 + sum_k (cos_amp cos kt + sin_amp sin kt), traced in polar form.
struct FourierCurve {
  double r0 = 1.0;
  std::vector<Harmonic> harmonics;
};

struct BoundaryPoint {
  double t = 0.0;
  double arclength = 0.0;
  Vec2 position = Vec2::Zero();
  Vec2 outward_normal = Vec2::Zero();
  double curvature = 0.0;
};

class Domain {
 public:
  using Kind = std::variant<Ellipse, FourierCurve>;

  static Domain ellipse(double a, double b);
  static Domain fourier(double r0, std::vector<Harmonic> harmonics);
  /// Validates the curve (closed, simple, kappa > 1e-9 on 10^4 samples).
  explicit Domain(Kind kind);

  const Kind& kind() const { return kind_; }

  Vec2 position(double t) const;
  Vec2 velocity(double t) const;
  Vec2 acceleration(double t) const;
  double curvature(double t) const;
  Vec2 outward_normal(double t) const;
  BoundaryPoint point_at(double t) const;

  double perimeter() const { return perimeter_; }
  /// Arclength from t = 0 to t, t in [0, 2pi].
  double arclength(double t) const;
  /// Inverse of arclength(), s in [0, perimeter].
  double parameter_at_arclength(double s) const;

  Vec2 centroid() const { return centroid_; }
  double area() const { return area_; }
  double diameter() const { return diameter_; }

  /// True when the curve is invariant under both (x,y)->(-x,y) and (x,y)->(x,-y)
  /// with t -> pi - t and t -> -t respectively.
  bool mirror_symmetric() const;

  Domain scaled(double lambda) const;

  /// Closed polygon through 2048 arclength-uniform boundary points.
  const std::vector<Vec2>& polygon() const { return polygon_; }
  /// Curve parameters of the polygon() vertices.
  const std::vector<double>& polygon_parameters() const { return polygon_t_; }

 private:
  struct ArclengthTable;

  Kind kind_;
  double perimeter_ = 0.0;
  double area_ = 0.0;
  double diameter_ = 0.0;
  Vec2 centroid_ = Vec2::Zero();
  std::shared_ptr<const ArclengthTable> table_;
  std::vector<Vec2> polygon_;
  std::vector<double> polygon_t_;

  double segment_length(double t0, double t1) const;
};

double curvature(const Domain& domain, double t);

/// Maximum boundary curvature: uniform sampling then Brent refinement.
double kappa_max(const Domain& domain, int n_samples = 1024);

/// Radius of the largest inscribed disk.
double inradius(const Domain& domain);

/// Distance from p to the boundary curve (refined by 1-D minimization).
double distance_to_boundary(const Domain& domain, const Vec2& p);

/// n points equally spaced in arclength, starting at t = 0.
std::vector<BoundaryPoint> boundary_sample(const Domain& domain, int n);

/// Winding-number test against Domain::polygon(); strict interior only.
bool contains(const Domain& domain, const Vec2& p);

}  // namespace mcflow
