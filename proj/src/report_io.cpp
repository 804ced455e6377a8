#include "mcflow/report_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "mcflow/errors.hpp"

namespace mcflow {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double get_num(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }
Vec2 get_vec(const json& j) { return Vec2(j.at(0).get<double>(), j.at(1).get<double>()); }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os.precision(17);
  return os;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

json to_json(const VerificationReport& r) {
  json j;
  j["problem"] = r.problem;
  j["domain"] = r.domain;
  j["h"] = r.h;
  j["mesh"] = {{"vertices", r.num_vertices},
               {"triangles", r.num_triangles},
               {"min_angle_degrees", r.min_angle_degrees}};
  j["solver"] = {{"iterations", r.newton_iterations}, {"final_residual", r.final_residual}};
  j["q_min"] = r.q_min;
  j["u_min"] = r.u_min;
  j["kappa_max"] = r.kappa_max;
  j["inradius"] = r.inradius;
  j["interior_negative"] = r.interior_negative;
  j["mirror_symmetry_defect"] =
      r.mirror_symmetry_defect ? num(*r.mirror_symmetry_defect) : json(nullptr);

  json crit;
  crit["count"] = r.critical.count;
  crit["tol"] = r.critical.tol;
  crit["points"] = json::array();
  for (const auto& p : r.critical.points) {
    crit["points"].push_back({{"position", vec(p.position)},
                              {"gradient_norm", p.gradient_norm},
                              {"hessian_diag", vec(p.hessian_diag)},
                              {"cluster_size", p.cluster_size}});
  }
  crit["z_theta_zero_counts"] = json::array();
  for (const auto& z : r.critical.z_theta_zero_counts) {
    crit["z_theta_zero_counts"].push_back({{"theta", z.theta}, {"count", z.count}});
  }
  j["critical"] = crit;

  j["pfunctions"] = json::array();
  for (const auto& p : r.pfunctions) {
    j["pfunctions"].push_back({{"kind", to_string(p.kind)},
                               {"beta", p.beta},
                               {"argmin_vertex", p.argmin_vertex},
                               {"argmax_vertex", p.argmax_vertex},
                               {"boundary_min", num(p.boundary_min)},
                               {"interior_min", num(p.interior_min)},
                               {"range", p.range},
                               {"min_on_boundary", p.min_on_boundary},
                               {"asserted", p.asserted},
                               {"argmax_to_critical", num(p.argmax_to_critical)}});
  }

  j["bounds"] = json::array();
  for (const auto& b : r.bounds) {
    j["bounds"].push_back({{"name", to_string(b.name)},
                           {"lhs", num(b.lhs)},
                           {"rhs", num(b.rhs)},
                           {"slack", num(b.slack)},
                           {"holds", b.holds},
                           {"applicable", b.applicable}});
  }
  j["boundary_identity_residual"] = r.boundary_identity_residual;
  j["notes"] = r.notes;
  j["all_bounds_hold"] = r.bounds_ok();
  return j;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  r.problem = j.at("problem").get<std::string>();
  r.domain = j.at("domain").get<std::string>();
  r.h = j.at("h").get<double>();
  r.num_vertices = j.at("mesh").at("vertices").get<int>();
  r.num_triangles = j.at("mesh").at("triangles").get<int>();
  r.min_angle_degrees = j.at("mesh").at("min_angle_degrees").get<double>();
  r.newton_iterations = j.at("solver").at("iterations").get<int>();
  r.final_residual = j.at("solver").at("final_residual").get<double>();
  r.q_min = j.at("q_min").get<double>();
  r.u_min = j.at("u_min").get<double>();
  r.kappa_max = j.at("kappa_max").get<double>();
  r.inradius = j.at("inradius").get<double>();
  r.interior_negative = j.at("interior_negative").get<bool>();
  if (!j.at("mirror_symmetry_defect").is_null()) {
    r.mirror_symmetry_defect = j.at("mirror_symmetry_defect").get<double>();
  }

  const auto& c = j.at("critical");
  r.critical.count = c.at("count").get<int>();
  r.critical.tol = c.at("tol").get<double>();
  for (const auto& p : c.at("points")) {
    r.critical.points.push_back({get_vec(p.at("position")), p.at("gradient_norm").get<double>(),
                                 get_vec(p.at("hessian_diag")), p.at("cluster_size").get<int>()});
  }
  for (const auto& z : c.at("z_theta_zero_counts")) {
    r.critical.z_theta_zero_counts.push_back({z.at("theta").get<double>(), z.at("count").get<int>()});
  }

  for (const auto& p : j.at("pfunctions")) {
    PFunctionSummary s;
    s.kind = p.at("kind").get<std::string>() == "Phi" ? PKind::Phi : PKind::Psi;
    s.beta = p.at("beta").get<double>();
    s.argmin_vertex = p.at("argmin_vertex").get<int>();
    s.argmax_vertex = p.at("argmax_vertex").get<int>();
    s.boundary_min = get_num(p, "boundary_min");
    s.interior_min = get_num(p, "interior_min");
    s.range = p.at("range").get<double>();
    s.min_on_boundary = p.at("min_on_boundary").get<bool>();
    s.asserted = p.at("asserted").get<bool>();
    s.argmax_to_critical = p.at("argmax_to_critical").is_null()
                               ? std::numeric_limits<double>::infinity()
                               : p.at("argmax_to_critical").get<double>();
    r.pfunctions.push_back(s);
  }

  for (const auto& b : j.at("bounds")) {
    BoundCheck c2;
    const auto name = bound_from_string(b.at("name").get<std::string>());
    if (!name) throw Error("unknown bound name in report");
    c2.name = *name;
    c2.lhs = get_num(b, "lhs");
    c2.rhs = get_num(b, "rhs");
    c2.slack = get_num(b, "slack");
    c2.holds = b.at("holds").get<bool>();
    c2.applicable = b.at("applicable").get<bool>();
    r.bounds.push_back(c2);
  }
  r.boundary_identity_residual = j.at("boundary_identity_residual").get<double>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

std::string dump_report(const VerificationReport& report) { return to_json(report).dump(2) + "\n"; }

bool reports_equal(const VerificationReport& a, const VerificationReport& b) {
  if (a.problem != b.problem || a.domain != b.domain || a.h != b.h ||
      a.num_vertices != b.num_vertices || a.num_triangles != b.num_triangles ||
      a.min_angle_degrees != b.min_angle_degrees || a.newton_iterations != b.newton_iterations ||
      a.final_residual != b.final_residual || a.q_min != b.q_min || a.u_min != b.u_min ||
      a.kappa_max != b.kappa_max || a.inradius != b.inradius ||
      a.interior_negative != b.interior_negative ||
      a.mirror_symmetry_defect.has_value() != b.mirror_symmetry_defect.has_value() ||
      a.boundary_identity_residual != b.boundary_identity_residual || a.notes != b.notes) {
    return false;
  }
  if (a.mirror_symmetry_defect && !same(*a.mirror_symmetry_defect, *b.mirror_symmetry_defect)) {
    return false;
  }
  if (a.critical.count != b.critical.count || a.critical.tol != b.critical.tol ||
      a.critical.points.size() != b.critical.points.size() ||
      a.critical.z_theta_zero_counts.size() != b.critical.z_theta_zero_counts.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.critical.points.size(); ++i) {
    const auto &p = a.critical.points[i], &q = b.critical.points[i];
    if (p.position != q.position || p.gradient_norm != q.gradient_norm ||
        p.hessian_diag != q.hessian_diag || p.cluster_size != q.cluster_size) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.critical.z_theta_zero_counts.size(); ++i) {
    const auto &p = a.critical.z_theta_zero_counts[i], &q = b.critical.z_theta_zero_counts[i];
    if (p.theta != q.theta || p.count != q.count) return false;
  }
  if (a.pfunctions.size() != b.pfunctions.size() || a.bounds.size() != b.bounds.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.pfunctions.size(); ++i) {
    const auto &p = a.pfunctions[i], &q = b.pfunctions[i];
    if (p.kind != q.kind || p.beta != q.beta || p.argmin_vertex != q.argmin_vertex ||
        p.argmax_vertex != q.argmax_vertex || !same(p.boundary_min, q.boundary_min) ||
        !same(p.interior_min, q.interior_min) || p.range != q.range ||
        p.min_on_boundary != q.min_on_boundary || p.asserted != q.asserted ||
        p.argmax_to_critical != q.argmax_to_critical) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.bounds.size(); ++i) {
    const auto &p = a.bounds[i], &q = b.bounds[i];
    if (p.name != q.name || !same(p.lhs, q.lhs) || !same(p.rhs, q.rhs) ||
        !same(p.slack, q.slack) || p.holds != q.holds || p.applicable != q.applicable) {
      return false;
    }
  }
  return true;
}

void write_mesh_csv(const Mesh& mesh, const std::filesystem::path& dir) {
  auto vs = open_out(dir / "mesh_vertices.csv");
  vs << "id,x,y,is_boundary,arclength\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2& p = mesh.vertices()[v];
    vs << v << ',' << p.x() << ',' << p.y() << ',' << (mesh.is_boundary(v) ? 1 : 0) << ',';
    if (mesh.is_boundary(v)) vs << mesh.arclength(v);
    vs << '\n';
  }
  auto ts = open_out(dir / "mesh_triangles.csv");
  ts << "v0,v1,v2\n";
  for (const auto& t : mesh.triangles()) ts << t[0] << ',' << t[1] << ',' << t[2] << '\n';
}

void write_solution_csv(const ScalarField& field, const GradientField& grads,
                        const std::filesystem::path& path) {
  const Mesh& mesh = *field.mesh;
  auto os = open_out(path);
  os << "id,x,y,u,ux,uy\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2& p = mesh.vertices()[v];
    const Vec2 g = grads.gradient(v);
    os << v << ',' << p.x() << ',' << p.y() << ',' << field.values[v] << ',' << g.x() << ','
       << g.y() << '\n';
  }
}

void write_solver_log(const std::vector<NewtonStep>& log, const std::filesystem::path& path) {
  auto os = open_out(path);
  for (const auto& s : log) {
    os << json{{"iter", s.iteration},
               {"residual", s.residual},
               {"damping", s.damping},
               {"parameter", s.parameter}}
              .dump()
       << '\n';
  }
}

void write_radial_csv(const RadialSolution& sol, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "r,p,u\n";
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    os << sol.r[i] << ',' << sol.p[i] << ',' << sol.u[i] << '\n';
  }
}

json radial_fixture(const RadialSolution& sol) {
  return {{"problem", sol.problem.name()},
          {"kind", sol.problem.is_power() ? "power_mc" : "constant_forcing"},
          {"parameter", sol.problem.parameter()},
          {"R", sol.R},
          {"n", static_cast<int>(sol.r.size()) - 2},
          {"u_min", sol.u_min()},
          {"q", sol.boundary_slope()}};
}

void write_pfield_csv(const Mesh& mesh, const PFunctionField& pf,
                      const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "id,x,y,P\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Vec2& p = mesh.vertices()[v];
    os << v << ',' << p.x() << ',' << p.y() << ',' << pf.values[v] << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
}

}  // namespace mcflow
