#include "mcflow/solver.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

#include "mcflow/parallel.hpp"

namespace mcflow {

namespace {

struct TriangleState {
  Vec2 grad;
  double W;
};

TriangleState triangle_state(const Mesh& mesh, int t, const Eigen::VectorXd& u) {
  const auto& tri = mesh.triangles()[t];
  const auto& dphi = mesh.shape_gradients(t);
  const Vec2 g = u[tri[0]] * dphi[0] + u[tri[1]] * dphi[1] + u[tri[2]] * dphi[2];
  return {g, std::sqrt(1.0 + g.squaredNorm())};
}

void check_boundary(const Mesh& mesh, const Eigen::VectorXd& u) {
  if (u.size() != mesh.num_vertices()) {
    throw InvalidArgument("field size does not match the mesh vertex count");
  }
  for (int b = 0; b < mesh.num_boundary(); ++b) {
    if (u[b] != 0.0) throw InvalidArgument("field must vanish at boundary vertices");
  }
}

double inf_norm(const Eigen::VectorXd& r) { return r.size() ? r.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Eigen::VectorXd with_boundary(const Mesh& mesh, const Eigen::VectorXd& interior) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.num_vertices());
  u.tail(mesh.num_interior()) = interior;
  return u;
}

Eigen::VectorXd residual(const Mesh& mesh, const Eigen::VectorXd& u, const Problem& problem) {
  check_boundary(mesh, u);
  const int nt = mesh.num_triangles();
  std::vector<std::array<double, 3>> local(nt);
  parallel_for(nt, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto [g, W] = triangle_state(mesh, static_cast<int>(t), u);
      const double A = mesh.area(static_cast<int>(t));
      const double f = problem.forcing(W) * A / 3.0;
      const auto& dphi = mesh.shape_gradients(static_cast<int>(t));
      for (int i = 0; i < 3; ++i) local[t][i] = g.dot(dphi[i]) / W * A + f;
    }
  });
  Eigen::VectorXd R = Eigen::VectorXd::Zero(mesh.num_interior());
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      const int k = mesh.interior_index(tri[i]);
      if (k >= 0) R[k] += local[t][i];
    }
  }
  return R;
}

Eigen::SparseMatrix<double> jacobian(const Mesh& mesh, const Eigen::VectorXd& u,
                                     const Problem& problem) {
  check_boundary(mesh, u);
  const int nt = mesh.num_triangles();
  std::vector<std::array<double, 9>> local(nt);
  parallel_for(nt, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const auto [g, W] = triangle_state(mesh, static_cast<int>(t), u);
      const double A = mesh.area(static_cast<int>(t));
      const double W3 = W * W * W;
      const double dg = problem.forcing_derivative(W);
      const auto& dphi = mesh.shape_gradients(static_cast<int>(t));
      std::array<double, 3> gd{g.dot(dphi[0]), g.dot(dphi[1]), g.dot(dphi[2])};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double stiff = dphi[j].dot(dphi[i]) / W - gd[i] * gd[j] / W3;
          const double force = dg * gd[j] / W / 3.0;
          local[t][3 * i + j] = (stiff + force) * A;
        }
      }
    }
  });
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nt) * 9);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      const int ki = mesh.interior_index(tri[i]);
      if (ki < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int kj = mesh.interior_index(tri[j]);
        if (kj < 0) continue;
        trip.emplace_back(ki, kj, local[t][3 * i + j]);
      }
    }
  }
  Eigen::SparseMatrix<double> J(mesh.num_interior(), mesh.num_interior());
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

SolveResult newton_solve(std::shared_ptr<const Mesh> mesh_ptr, const Problem& problem,
                         const SolveOptions& opts) {
  if (!mesh_ptr) throw InvalidArgument("newton_solve needs a mesh");
  if (!(opts.residual_tol > 0.0)) throw InvalidArgument("residual_tol must be positive");
  if (opts.continuation_steps < 1) throw InvalidArgument("continuation_steps must be >= 1");
  const Mesh& mesh = *mesh_ptr;

  SolveResult out;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.num_vertices());
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  int total = 0;
  double rn = std::numeric_limits<double>::infinity();

  for (int stage = 1; stage <= opts.continuation_steps; ++stage) {
    const double value = stage == opts.continuation_steps
                             ? problem.parameter()
                             : problem.parameter() * stage / opts.continuation_steps;
    const Problem current = problem.with_parameter(value);
    Eigen::VectorXd R = residual(mesh, u, current);
    rn = inf_norm(R);
    out.log.push_back({total, rn, 1.0, value});
    int it = 0;
    while (!(rn <= opts.residual_tol)) {
      if (it >= opts.max_iters) {
        throw NonConvergence(total, rn, out.log, "iteration limit reached");
      }
      const auto J = jacobian(mesh, u, current);
      if (!analyzed) {
        lu.analyzePattern(J);
        analyzed = true;
      }
      lu.factorize(J);
      if (lu.info() != Eigen::Success) {
        throw NonConvergence(total, rn, out.log, "singular Jacobian");
      }
      const Eigen::VectorXd delta = lu.solve(-R);
      if (!delta.allFinite()) throw NonConvergence(total, rn, out.log, "non-finite Newton step");

      double lambda = 1.0;
      bool accepted = false;
      Eigen::VectorXd trial_u;
      Eigen::VectorXd trial_R;
      for (int k = 0; k <= opts.max_halvings; ++k) {
        trial_u = u;
        trial_u.tail(mesh.num_interior()) += lambda * delta;
        trial_R = residual(mesh, trial_u, current);
        const double tn = inf_norm(trial_R);
        if (std::isfinite(tn) && tn < (1.0 - 1e-4 * lambda) * rn) {
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      ++it;
      ++total;
      if (!accepted) {
        out.log.push_back({total, rn, 0.0, value});
        throw NonConvergence(total, rn, out.log, "line search failed");
      }
      u = std::move(trial_u);
      R = std::move(trial_R);
      rn = inf_norm(R);
      out.log.push_back({total, rn, lambda, value});
    }
  }

  for (int v = mesh.num_boundary(); v < mesh.num_vertices(); ++v) {
    if (!(u[v] < 0.0)) {
      throw SignViolation("converged field is not negative at interior vertex " +
                          std::to_string(v));
    }
  }
  out.field = ScalarField{std::move(mesh_ptr), std::move(u)};
  out.iterations = total;
  out.final_residual = rn;
  return out;
}

}  // namespace mcflow
