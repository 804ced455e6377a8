#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcflow/geometry.hpp"
#include "mcflow/gradient.hpp"
#include "mcflow/pfunc.hpp"
#include "mcflow/problem.hpp"
#include "mcflow/solver.hpp"

namespace mcflow {

struct CriticalPoint {
  Vec2 position = Vec2::Zero();
  double gradient_norm = 0.0;  // interpolated at position
  Vec2 hessian_diag = Vec2::Zero();
  int cluster_size = 0;
};

struct ZeroCount {
  double theta = 0.0;
  int count = 0;
};

struct CriticalPointReport {
  std::vector<CriticalPoint> points;
  int count = 0;
  double tol = 0.0;
  std::vector<ZeroCount> z_theta_zero_counts;
};

/// 5 h max|grad u|.
double default_critical_tolerance(const GradientField& grads);

/// Interior vertices with |grad u| < tol, clustered by mesh adjacency. Each
/// cluster is located at the zero of the least-squares affine fit of grad u
/// over the cluster (the 1/|grad u|-weighted centroid if the fit is singular
/// or its zero lies more than h outside the cluster).
/// tol <= 0 selects default_critical_tolerance. Throws NoCriticalPoint.
CriticalPointReport find_critical_points(const GradientField& grads, double tol = 0.0);

/// Boundary edges (b, b+1 mod n) across which z(theta) = u_1 cos(theta) +
/// u_2 sin(theta) changes sign; exact zeros are merged with a neighbor.
std::vector<int> z_theta_crossings(const GradientField& grads, double theta);
int z_theta_boundary_zeros(const GradientField& grads, double theta);

/// max over boundary vertices of the normal-coordinate identity defect:
///   PowerMC:          u_nn + kappa u_n (1 + u_n^2) - (1 + u_n^2)^((3-alpha)/2)
///   ConstantForcing:  u_nn - (1 + u_n^2)(1 - kappa u_n) - mu (1 + u_n^2)^(3/2)
double boundary_identity_residual(const GradientField& grads, const Problem& problem);
/// Same from explicit boundary data.
double boundary_identity_residual(std::span<const double> kappa, std::span<const double> un,
                                  std::span<const double> unn, const Problem& problem);

enum class BoundName { Eq1_9, Eq1_10, Eq1_11, Eq1_12, Thm6_1, Eq6_11 };

std::string to_string(BoundName name);
std::optional<BoundName> bound_from_string(const std::string& s);

struct BoundCheck {
  BoundName name = BoundName::Eq1_9;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs for lower bounds, rhs - lhs for upper bounds
  bool holds = false;
  bool applicable = false;

  bool operator==(const BoundCheck&) const = default;
};

/// 1e-3 max(1, |rhs|).
double bound_tolerance(double rhs);

/// All six bounds, in BoundName order. Lower bounds on q_min and -u_min from
/// kappa_max, upper bounds on -u_min from the inradius d. Bounds that do not
/// apply to the problem (or its side conditions) have applicable = false
/// and holds = false; their lhs/rhs are still filled where finite.
std::vector<BoundCheck> check_bounds(double q_min, double u_min, double kappa_max, double d,
                                     const Problem& problem);

/// max |u(x) - u(mirror x)| over vertices for both axis reflections.
double mirror_symmetry_defect(const ScalarField& field);

struct PFunctionSummary {
  PKind kind = PKind::Phi;
  double beta = 0.0;
  int argmin_vertex = -1;
  int argmax_vertex = -1;
  double boundary_min = 0.0;
  double interior_min = 0.0;
  double range = 0.0;
  bool min_on_boundary = false;
  /// The minimum principle is only claimed for beta in [1, 2].
  bool asserted = false;
  /// Distance from the argmax vertex to the nearest critical point.
  double argmax_to_critical = 0.0;

  bool operator==(const PFunctionSummary&) const = default;
};

struct VerificationReport {
  std::string problem;
  std::string domain;
  double h = 0.0;
  int num_vertices = 0;
  int num_triangles = 0;
  double min_angle_degrees = 0.0;
  int newton_iterations = 0;
  double final_residual = 0.0;

  double q_min = 0.0;
  double u_min = 0.0;
  double kappa_max = 0.0;
  double inradius = 0.0;
  bool interior_negative = false;
  std::optional<double> mirror_symmetry_defect;

  CriticalPointReport critical;
  std::vector<PFunctionSummary> pfunctions;
  std::vector<BoundCheck> bounds;
  double boundary_identity_residual = 0.0;
  std::vector<std::string> notes;

  /// Every applicable bound holds.
  bool bounds_ok() const;
  /// bounds_ok, one critical point, two z(theta) zeros for every theta,
  /// asserted minimum principles hold.
  bool all_ok() const;
};

std::string describe(const Domain& domain);

/// Everything produced by one end-to-end run.
struct RunArtifacts {
  std::shared_ptr<const Mesh> mesh;
  SolveResult solve;
  GradientField grads;
  std::vector<PFunctionField> pfields;
  VerificationReport report;
};

struct RunOptions {
  SolveOptions solve;
  GradientOptions gradient;
  int z_theta_samples = 8;  // theta = k pi / n, k = 0..n-1
};

/// triangulate, solve, recover gradients, P-functions for each beta,
/// critical census, z(theta) sweep, boundary identity, bounds.
RunArtifacts full_run(const Domain& domain, const Problem& problem, double h,
                      const std::vector<double>& betas, const RunOptions& opts = {});

VerificationReport full_report(const Domain& domain, const Problem& problem, double h,
                               const std::vector<double>& betas, const RunOptions& opts = {});

}  // namespace mcflow
