#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcflow/gradient.hpp"
#include "mcflow/pfunc.hpp"
#include "mcflow/radial.hpp"
#include "mcflow/verify.hpp"

namespace mcflow {

/// Non-finite numbers are written as null and read back as NaN (infinite
/// distances as +inf).
nlohmann::json to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& j);

/// Shortest round-trip decimal form of every double (at most 17 digits).
std::string dump_report(const VerificationReport& report);

bool reports_equal(const VerificationReport& a, const VerificationReport& b);

/// mesh_vertices.csv (id,x,y,is_boundary,arclength) and
/// mesh_triangles.csv (v0,v1,v2).
void write_mesh_csv(const Mesh& mesh, const std::filesystem::path& dir);
/// id,x,y,u,ux,uy with the gradient of GradientField::gradient.
void write_solution_csv(const ScalarField& field, const GradientField& grads,
                        const std::filesystem::path& path);
/// One JSON object per line: iter, residual, damping, parameter.
void write_solver_log(const std::vector<NewtonStep>& log, const std::filesystem::path& path);
/// r,p,u
void write_radial_csv(const RadialSolution& sol, const std::filesystem::path& path);
nlohmann::json radial_fixture(const RadialSolution& sol);
/// id,x,y,P
void write_pfield_csv(const Mesh& mesh, const PFunctionField& pf,
                      const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mcflow
