#pragma once

#include <map>
#include <memory>
#include <string>

#include "mcflow/geometry.hpp"
#include "mcflow/mesh.hpp"
#include "mcflow/problem.hpp"
#include "mcflow/radial.hpp"
#include "mcflow/solver.hpp"
#include "mcflow/verify.hpp"

namespace mcflow::testing {

inline Domain unit_disk() { return Domain::ellipse(1.0, 1.0); }
inline Domain ellipse21() { return Domain::ellipse(2.0, 1.0); }
inline Domain fourier_circle() { return Domain::fourier(1.0, {{2, 0.1, 0.0}}); }

inline std::shared_ptr<const Mesh> cached_mesh(const std::string& key, const Domain& d, double h) {
  static std::map<std::string, std::shared_ptr<const Mesh>> cache;
  const std::string k = key + "@" + std::to_string(h);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, std::make_shared<Mesh>(triangulate(d, h))).first;
  return it->second;
}

/// Full pipeline, memoised per (domain key, problem, h).
inline const RunArtifacts& cached_run(const std::string& key, const Domain& d, const Problem& p,
                                      double h) {
  static std::map<std::string, RunArtifacts> cache;
  const std::string k = key + "|" + p.name() + "@" + std::to_string(h);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, full_run(d, p, h, {1.0, 1.5, 2.0})).first;
  return it->second;
}

/// Max over mesh vertices of |u_h - u_radial(|x|)|.
inline double max_radial_error(const ScalarField& f, const RadialSolution& sol) {
  double e = 0.0;
  for (int v = 0; v < f.mesh->num_vertices(); ++v) {
    e = std::max(e, std::abs(f.values[v] - sol.u_at(f.mesh->vertices()[v].norm())));
  }
  return e;
}

}  // namespace mcflow::testing
