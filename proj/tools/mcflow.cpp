// mcflow solve|radial|verify --config <file> [--explore] [--h v] [--alpha v] [--mu v] [--out dir]
//
// Exit status: 0 success, 1 a verification check failed, 2 nonconvergence
// or slope blow-up, 3 configuration error, 4 any other error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mcflow/config.hpp"
#include "mcflow/errors.hpp"
#include "mcflow/gradient.hpp"
#include "mcflow/radial.hpp"
#include "mcflow/report_io.hpp"
#include "mcflow/verify.hpp"

namespace fs = std::filesystem;
using namespace mcflow;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kNoSolution = 2, kBadConfig = 3, kOther = 4 };

void print_trace(const std::vector<NewtonStep>& trace) {
  std::fprintf(stderr, "%5s  %-12s  %-10s  %s\n", "iter", "residual", "damping", "parameter");
  for (const auto& s : trace) {
    std::fprintf(stderr, "%5d  %-12.4e  %-10.4g  %g\n", s.iteration, s.residual, s.damping, s.parameter);
  }
}

fs::path prepare_output(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  return cfg.output_dir;
}

int cmd_solve(const RunConfig& cfg) {
  const fs::path out = prepare_output(cfg);
  const Domain domain(cfg.domain);
  auto mesh = std::make_shared<const Mesh>(triangulate(domain, cfg.h));
  const SolveResult res = newton_solve(mesh, cfg.problem, cfg.solve);
  const GradientField grads = recover_gradient(res.field);
  write_solution_csv(res.field, grads, out / "solution.csv");
  write_mesh_csv(*mesh, out);
  write_solver_log(res.log, out / "solver_log.jsonl");
  std::printf("%s on %s, h=%g: %d vertices, %d Newton iterations, residual %.3e, u_min %.10g\n",
              cfg.problem.name().c_str(), describe(domain).c_str(), cfg.h, mesh->num_vertices(),
              res.iterations, res.final_residual, res.field.min());
  std::printf("wrote %s\n", out.string().c_str());
  return kOk;
}

int cmd_radial(const RunConfig& cfg) {
  const fs::path out = prepare_output(cfg);
  RadialConfig rc;
  if (cfg.radial) {
    rc = *cfg.radial;
  } else if (const auto* e = std::get_if<Ellipse>(&cfg.domain); e && e->a == e->b) {
    rc.R = e->a;
  }
  const RadialSolution sol = solve_radial(cfg.problem, rc.R, rc.n);
  write_radial_csv(sol, out / "radial.csv");
  write_text(out / "radial_fixture.json", radial_fixture(sol).dump(2) + "\n");
  std::printf("%s on the disk R=%g (n=%d): u_min %.15g, q = p(R) %.15g\n",
              cfg.problem.name().c_str(), rc.R, rc.n, sol.u_min(), sol.boundary_slope());
  return kOk;
}

void print_report(const VerificationReport& r) {
  std::printf("%s on %s, h=%g\n", r.problem.c_str(), r.domain.c_str(), r.h);
  std::printf("  mesh %d vertices, %d triangles, min angle %.1f deg; Newton %d iterations, residual %.2e\n",
              r.num_vertices, r.num_triangles, r.min_angle_degrees, r.newton_iterations,
              r.final_residual);
  std::printf("  q_min %.6f  u_min %.6f  kappa_max %.6f  inradius %.6f\n", r.q_min, r.u_min,
              r.kappa_max, r.inradius);
  std::printf("  critical points %d; z(theta) zeros:", r.critical.count);
  for (const auto& z : r.critical.z_theta_zero_counts) std::printf(" %d", z.count);
  std::printf("\n  boundary identity residual %.4g\n", r.boundary_identity_residual);
  if (r.mirror_symmetry_defect) std::printf("  mirror symmetry defect %.2e\n", *r.mirror_symmetry_defect);

  std::printf("\n  %-5s %-5s %14s %14s %14s  %s\n", "P", "beta", "boundary min", "interior min",
              "range", "min on boundary");
  for (const auto& p : r.pfunctions) {
    std::printf("  %-5s %-5.3g %14.6f %14.6f %14.6f  %s%s\n", to_string(p.kind).c_str(), p.beta,
                p.boundary_min, p.interior_min, p.range, p.min_on_boundary ? "yes" : "NO",
                p.asserted ? "" : " (not asserted)");
  }

  std::printf("\n  %-7s %12s %12s %12s  %s\n", "bound", "lhs", "rhs", "slack", "status");
  for (const auto& b : r.bounds) {
    if (!b.applicable) {
      std::printf("  %-7s %12s %12s %12s  n/a\n", to_string(b.name).c_str(), "-", "-", "-");
      continue;
    }
    std::printf("  %-7s %12.6f %12.6f %12.6f  %s\n", to_string(b.name).c_str(), b.lhs, b.rhs, b.slack,
                b.holds ? "holds" : "FAILS");
  }
  for (const auto& n : r.notes) std::printf("  note: %s\n", n.c_str());
}

int cmd_verify(const RunConfig& cfg) {
  const fs::path out = prepare_output(cfg);
  const Domain domain(cfg.domain);
  RunOptions opts;
  opts.solve = cfg.solve;
  const RunArtifacts art = full_run(domain, cfg.problem, cfg.h, cfg.betas, opts);
  write_text(out / "report.json", dump_report(art.report) + "\n");
  if (cfg.emit_fields) {
    write_solution_csv(art.solve.field, art.grads, out / "solution.csv");
    write_mesh_csv(*art.mesh, out);
    write_solver_log(art.solve.log, out / "solver_log.jsonl");
    for (const auto& pf : art.pfields) {
      char name[64];
      std::snprintf(name, sizeof name, "pfield_%s_beta%g.csv", to_string(pf.kind).c_str(), pf.beta);
      write_pfield_csv(*art.mesh, pf, out / name);
    }
  }
  print_report(art.report);
  const bool ok = art.report.all_ok();
  std::printf("\n%s; wrote %s\n", ok ? "all applicable checks pass" : "SOME CHECKS FAIL",
              (out / "report.json").string().c_str());
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-curvature Dirichlet problems: solve, radial oracle, verification"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");

  std::string config_path;
  ConfigOverrides ov;
  double h = 0, alpha = 0, mu = 0;
  std::string out;

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_flag("--explore", ov.explore, "allow beta outside [1, 2] (reported, not asserted)");
    sub->add_option("--h", h, "mesh size");
    sub->add_option("--alpha", alpha, "exponent of the power_mc problem");
    sub->add_option("--mu", mu, "forcing of the constant_forcing problem");
    sub->add_option("--out", out, "output directory");
  };
  auto* solve = app.add_subcommand("solve", "solve and write the nodal solution");
  auto* radial = app.add_subcommand("radial", "radial ODE oracle on a disk");
  auto* verify = app.add_subcommand("verify", "solve and check every theorem-level property");
  for (auto* s : {solve, radial, verify}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }
  auto* sub = app.get_subcommands().front();
  if (sub->count("--h")) ov.h = h;
  if (sub->count("--alpha")) ov.alpha = alpha;
  if (sub->count("--mu")) ov.mu = mu;
  if (sub->count("--out")) ov.output_dir = out;

  try {
    const RunConfig cfg = load_config(config_path, ov);
    if (sub == solve) return cmd_solve(cfg);
    if (sub == radial) return cmd_radial(cfg);
    return cmd_verify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_trace(e.trace());
    return kNoSolution;
  } catch (const SlopeBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoSolution;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
