#include "mcflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "mcflow/errors.hpp"

namespace mcflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double default_critical_tolerance(const GradientField& grads) {
  const Mesh& mesh = *grads.mesh;
  double gmax = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) gmax = std::max(gmax, grads.gradient_norm(v));
  return 5.0 * mesh.h() * gmax;
}

CriticalPointReport find_critical_points(const GradientField& grads, double tol) {
  if (!grads.mesh) throw InvalidArgument("gradient field has no mesh");
  const Mesh& mesh = *grads.mesh;
  CriticalPointReport rep;
  rep.tol = tol > 0.0 ? tol : default_critical_tolerance(grads);

  std::vector<char> flagged(mesh.num_vertices(), 0);
  for (int v = mesh.num_boundary(); v < mesh.num_vertices(); ++v) {
    flagged[v] = grads.vertex_gradients[v].norm() < rep.tol;
  }

  std::vector<int> cluster_of(mesh.num_vertices(), -1);
  for (int seed = mesh.num_boundary(); seed < mesh.num_vertices(); ++seed) {
    if (!flagged[seed] || cluster_of[seed] >= 0) continue;
    const int id = static_cast<int>(rep.points.size());
    std::vector<int> members{seed};
    cluster_of[seed] = id;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (int w : mesh.vertex_neighbors(members[head])) {
        if (flagged[w] && cluster_of[w] < 0) {
          cluster_of[w] = id;
          members.push_back(w);
        }
      }
    }

    Vec2 mean = Vec2::Zero();
    Vec2 lo = mesh.vertices()[seed], hi = lo;
    for (int v : members) {
      mean += mesh.vertices()[v];
      lo = lo.cwiseMin(mesh.vertices()[v]);
      hi = hi.cwiseMax(mesh.vertices()[v]);
    }
    mean /= static_cast<double>(members.size());

    CriticalPoint cp;
    cp.cluster_size = static_cast<int>(members.size());
    bool located = false;
    if (members.size() >= 3) {
      // grad u(x) ~ g0 + H (x - mean), fitted per component.
      Eigen::MatrixXd A(members.size(), 3);
      Eigen::MatrixXd B(members.size(), 2);
      for (std::size_t r = 0; r < members.size(); ++r) {
        const Vec2 d = mesh.vertices()[members[r]] - mean;
        A.row(r) << 1.0, d.x(), d.y();
        B.row(r) = grads.vertex_gradients[members[r]].transpose();
      }
      const auto qr = A.colPivHouseholderQr();
      if (qr.rank() == 3) {
        const Eigen::MatrixXd C = qr.solve(B);  // 3 x 2
        const Vec2 g0(C(0, 0), C(0, 1));
        Eigen::Matrix2d H;
        H << C(1, 0), C(2, 0), C(1, 1), C(2, 1);  // H(i, j) = d_j u_i
        const auto lu = H.fullPivLu();
        if (lu.isInvertible()) {
          const Vec2 x = mean - lu.solve(g0);
          const double pad = mesh.h();
          if ((x.array() >= lo.array() - pad).all() && (x.array() <= hi.array() + pad).all()) {
            cp.position = x;
            cp.hessian_diag = Vec2(H(0, 0), H(1, 1));
            located = true;
          }
        }
      }
    }
    if (!located) {
      Vec2 acc = Vec2::Zero();
      double wsum = 0.0;
      for (int v : members) {
        const double w = 1.0 / (grads.vertex_gradients[v].norm() + 1e-14);
        acc += w * mesh.vertices()[v];
        wsum += w;
      }
      cp.position = acc / wsum;
    }

    const auto loc = mesh.locate(cp.position);
    if (loc) {
      Vec2 g = Vec2::Zero();
      const auto& tri = mesh.triangles()[loc->triangle];
      for (int i = 0; i < 3; ++i) g += loc->weights[i] * grads.vertex_gradients[tri[i]];
      cp.gradient_norm = g.norm();
    } else {
      cp.gradient_norm = grads.vertex_gradients[seed].norm();
    }
    rep.points.push_back(cp);
  }

  rep.count = static_cast<int>(rep.points.size());
  if (rep.count == 0) throw NoCriticalPoint(rep.tol);
  return rep;
}

std::vector<int> z_theta_crossings(const GradientField& grads, double theta) {
  const Mesh& mesh = *grads.mesh;
  const int n = mesh.num_boundary();
  const Vec2 e(std::cos(theta), std::sin(theta));
  std::vector<int> sign(n);
  for (int b = 0; b < n; ++b) {
    const double z = grads.gradient(b).dot(e);
    sign[b] = (z > 0.0) - (z < 0.0);
  }
  // Merge exact zeros with the preceding nonzero neighbor.
  const auto first = std::find_if(sign.begin(), sign.end(), [](int s) { return s != 0; });
  if (first == sign.end()) return {};
  const int start = static_cast<int>(first - sign.begin());
  int prev = sign[start];
  for (int k = 1; k <= n; ++k) {
    int& s = sign[(start + k) % n];
    if (s == 0) s = prev;
    prev = s;
  }
  std::vector<int> edges;
  for (int b = 0; b < n; ++b) {
    if (sign[b] != sign[(b + 1) % n]) edges.push_back(b);
  }
  return edges;
}

int z_theta_boundary_zeros(const GradientField& grads, double theta) {
  return static_cast<int>(z_theta_crossings(grads, theta).size());
}

double boundary_identity_residual(std::span<const double> kappa, std::span<const double> un,
                                  std::span<const double> unn, const Problem& problem) {
  if (kappa.size() != un.size() || un.size() != unn.size()) {
    throw InvalidArgument("boundary data arrays differ in length");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < un.size(); ++i) {
    const double p = un[i], k = kappa[i];
    const double w2 = 1.0 + p * p;
    double defect;
    if (problem.is_power()) {
      defect = unn[i] + k * p * w2 - std::pow(w2, 0.5 * (3.0 - problem.alpha()));
    } else {
      defect = unn[i] - w2 * (1.0 - k * p) - problem.mu() * w2 * std::sqrt(w2);
    }
    worst = std::max(worst, std::abs(defect));
  }
  return worst;
}

double boundary_identity_residual(const GradientField& grads, const Problem& problem) {
  const Mesh& mesh = *grads.mesh;
  std::vector<double> kappa(mesh.num_boundary());
  for (int b = 0; b < mesh.num_boundary(); ++b) kappa[b] = mesh.boundary_point(b).curvature;
  return boundary_identity_residual(kappa, grads.normal_derivative,
                                    grads.normal_second_derivative, problem);
}

std::string to_string(BoundName name) {
  switch (name) {
    case BoundName::Eq1_9: return "Eq1_9";
    case BoundName::Eq1_10: return "Eq1_10";
    case BoundName::Eq1_11: return "Eq1_11";
    case BoundName::Eq1_12: return "Eq1_12";
    case BoundName::Thm6_1: return "Thm6_1";
    case BoundName::Eq6_11: return "Eq6_11";
  }
  return "?";
}

std::optional<BoundName> bound_from_string(const std::string& s) {
  for (auto n : {BoundName::Eq1_9, BoundName::Eq1_10, BoundName::Eq1_11, BoundName::Eq1_12,
                 BoundName::Thm6_1, BoundName::Eq6_11}) {
    if (to_string(n) == s) return n;
  }
  return std::nullopt;
}

double bound_tolerance(double rhs) { return 1e-3 * std::max(1.0, std::abs(rhs)); }

std::vector<BoundCheck> check_bounds(double q_min, double u_min, double kappa_max, double d,
                                     const Problem& problem) {
  const bool power = problem.is_power();
  const double a = problem.parameter();
  const double depth = -u_min;
  const bool narrow = d < 0.5 * std::numbers::pi;

  auto make = [](BoundName name, double lhs, double rhs, bool lower, bool applicable) {
    BoundCheck c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = lower ? lhs - rhs : rhs - lhs;
    c.applicable = applicable && std::isfinite(rhs);
    c.holds = c.applicable && c.slack >= -bound_tolerance(rhs);
    return c;
  };

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<BoundCheck> out;

  // Power-law problem, alpha != 1.
  const bool pw = power && a != 1.0;
  out.push_back(make(BoundName::Eq1_9, q_min, pw ? std::pow(kappa_max, -2.0 / (a + 1.0)) : nan,
                     true, pw));
  out.push_back(make(BoundName::Eq1_10, depth,
                     pw ? 2.0 / (a - 1.0) *
                              (std::pow(1.0 / kappa_max, (a - 1.0) / (a + 1.0)) - 1.0)
                        : nan,
                     true, pw));

  // Constant forcing.
  const double s = std::sqrt(1.0 + (1.0 + a) * (1.0 + a) / (4.0 * kappa_max * kappa_max));
  out.push_back(make(BoundName::Eq1_11, q_min, !power ? (1.0 + a) / (2.0 * kappa_max) : nan,
                     true, !power));
  out.push_back(make(BoundName::Eq1_12, depth,
                     !power ? 2.0 * std::log((1.0 + a) * s / (1.0 + a * s)) : nan, true, !power));

  // Upper bounds through the inradius.
  const bool t61 = power && a > 1.0 && narrow;
  out.push_back(make(BoundName::Thm6_1, depth,
                     t61 ? (std::pow(1.0 / std::cos(d), a - 1.0) - 1.0) / (a - 1.0) : nan, false,
                     t61));
  const bool e611 = !power && narrow;
  out.push_back(
      make(BoundName::Eq6_11, depth, e611 ? std::log(1.0 / std::cos(d)) : nan, false, e611));
  return out;
}

double mirror_symmetry_defect(const ScalarField& field) {
  const Mesh& mesh = *field.mesh;
  const std::span<const double> u(field.values.data(), field.values.size());
  double scale = 0.0;
  for (const auto& p : mesh.vertices()) scale = std::max(scale, p.norm());
  double worst = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2 p = mesh.vertices()[v];
    for (const Vec2& m : {Vec2(-p.x(), p.y()), Vec2(p.x(), -p.y())}) {
      auto val = mesh.interpolate(u, m);
      if (!val) {
        // Mirror of a boundary vertex: match it to a boundary vertex.
        int best = -1;
        double dist = kInf;
        for (int b = 0; b < mesh.num_boundary(); ++b) {
          const double dd = (mesh.vertices()[b] - m).norm();
          if (dd < dist) dist = dd, best = b;
        }
        if (best < 0 || dist > 1e-9 * scale) return kInf;
        val = u[best];
      }
      worst = std::max(worst, std::abs(*val - u[v]));
    }
  }
  return worst;
}

bool VerificationReport::bounds_ok() const {
  return std::all_of(bounds.begin(), bounds.end(),
                     [](const BoundCheck& b) { return !b.applicable || b.holds; });
}

bool VerificationReport::all_ok() const {
  if (!bounds_ok() || critical.count != 1 || !interior_negative) return false;
  for (const auto& z : critical.z_theta_zero_counts) {
    if (z.count != 2) return false;
  }
  for (const auto& p : pfunctions) {
    if (p.asserted && !p.min_on_boundary) return false;
  }
  return true;
}

std::string describe(const Domain& domain) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* e = std::get_if<Ellipse>(&domain.kind())) {
    os << "Ellipse(a=" << e->a << ", b=" << e->b << ")";
  } else {
    const auto& f = std::get<FourierCurve>(domain.kind());
    os << "FourierCurve(r0=" << f.r0;
    for (const auto& h : f.harmonics) {
      os << ", [" << h.k << ", " << h.cos_amp << ", " << h.sin_amp << "]";
    }
    os << ")";
  }
  return os.str();
}

RunArtifacts full_run(const Domain& domain, const Problem& problem, double h,
                      const std::vector<double>& betas, const RunOptions& opts) {
  RunArtifacts art;
  VerificationReport& rep = art.report;
  rep.problem = problem.name();
  rep.domain = describe(domain);
  rep.h = h;
  rep.kappa_max = kappa_max(domain);
  rep.inradius = inradius(domain);

  art.mesh = std::make_shared<const Mesh>(triangulate(domain, h));
  const Mesh& mesh = *art.mesh;
  rep.num_vertices = mesh.num_vertices();
  rep.num_triangles = mesh.num_triangles();
  rep.min_angle_degrees = mesh.min_angle_degrees();

  art.solve = newton_solve(art.mesh, problem, opts.solve);
  const ScalarField& field = art.solve.field;
  rep.newton_iterations = art.solve.iterations;
  rep.final_residual = art.solve.final_residual;
  rep.u_min = field.min();
  rep.interior_negative = true;
  for (int v = mesh.num_boundary(); v < mesh.num_vertices(); ++v) {
    rep.interior_negative = rep.interior_negative && field.values[v] < 0.0;
  }
  if (domain.mirror_symmetric()) rep.mirror_symmetry_defect = mirror_symmetry_defect(field);

  art.grads = recover_gradient(field, opts.gradient);
  rep.q_min = art.grads.boundary_gradient_min();

  try {
    rep.critical = find_critical_points(art.grads);
  } catch (const NoCriticalPoint& e) {
    rep.notes.push_back(e.what());
  }
  const int nz = std::max(1, opts.z_theta_samples);
  for (int k = 0; k < nz; ++k) {
    const double theta = k * std::numbers::pi / nz;
    rep.critical.z_theta_zero_counts.push_back({theta, z_theta_boundary_zeros(art.grads, theta)});
  }

  if (problem.is_soliton()) {
    rep.notes.push_back("Phi skipped: alpha = 1");
  } else {
    for (double beta : betas) {
      art.pfields.push_back(evaluate_field(field, art.grads, problem, beta));
      const auto& pf = art.pfields.back();
      PFunctionSummary s;
      s.kind = pf.kind;
      s.beta = beta;
      s.argmin_vertex = pf.argmin_vertex;
      s.argmax_vertex = pf.argmax_vertex;
      s.boundary_min = pf.boundary_min;
      s.interior_min = pf.interior_min;
      s.range = pf.range();
      s.min_on_boundary = pf.min_on_boundary;
      s.asserted = beta >= 1.0 && beta <= 2.0;
      s.argmax_to_critical = kInf;
      for (const auto& cp : rep.critical.points) {
        s.argmax_to_critical = std::min(
            s.argmax_to_critical, (mesh.vertices()[pf.argmax_vertex] - cp.position).norm());
      }
      if (!s.asserted) {
        std::ostringstream os;
        os << "minimum principle not asserted for beta = " << beta << " outside [1, 2]";
        rep.notes.push_back(os.str());
      }
      rep.pfunctions.push_back(s);
    }
  }

  rep.boundary_identity_residual = boundary_identity_residual(art.grads, problem);
  rep.bounds = check_bounds(rep.q_min, rep.u_min, rep.kappa_max, rep.inradius, problem);
  return art;
}

VerificationReport full_report(const Domain& domain, const Problem& problem, double h,
                               const std::vector<double>& betas, const RunOptions& opts) {
  return full_run(domain, problem, h, betas, opts).report;
}

}  // namespace mcflow
