#include "mcflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "mcflow/errors.hpp"

namespace mcflow {

namespace {

constexpr double kMinAngleDegrees = 20.0;

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  double s = len2 > 0.0 ? e.dot(p - a) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (a + s * e - p).norm();
}

double polygon_distance(const std::vector<Vec2>& poly, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

double triangle_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  auto angle = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
  };
  const double m = std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
  return m * 180.0 / std::numbers::pi;
}

using PointKey = std::pair<double, double>;

PointKey key_of(const Vec2& p) { return {p.x() == 0.0 ? 0.0 : p.x(), p.y() == 0.0 ? 0.0 : p.y()}; }

// Exact reflection maps for a point set that is symmetric about both axes.
struct MirrorMaps {
  std::vector<int> mx;  // (x, y) -> (-x, y)
  std::vector<int> my;  // (x, y) -> (x, -y)
};

std::optional<MirrorMaps> mirror_maps(const std::vector<Vec2>& pts) {
  std::map<PointKey, int> index;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) index[key_of(pts[i])] = i;
  MirrorMaps m;
  m.mx.resize(pts.size());
  m.my.resize(pts.size());
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    auto ix = index.find(key_of(Vec2(-pts[i].x(), pts[i].y())));
    auto iy = index.find(key_of(Vec2(pts[i].x(), -pts[i].y())));
    if (ix == index.end() || iy == index.end()) return std::nullopt;
    m.mx[i] = ix->second;
    m.my[i] = iy->second;
  }
  return m;
}

Triangle sorted(Triangle t) {
  std::sort(t.begin(), t.end());
  return t;
}

Triangle mapped(const Triangle& t, const std::vector<int>& m) {
  return sorted({m[t[0]], m[t[1]], m[t[2]]});
}

// Cocircular point groups that straddle a symmetry axis admit no symmetric
// Delaunay choice. Each connected group of asymmetric triangles is replaced by
// a fan around a Steiner point placed symmetrically.
bool symmetrize(std::vector<Vec2>& pts, std::vector<Triangle>& tris) {
  for (int pass = 0; pass < 3; ++pass) {
    const auto maps = mirror_maps(pts);
    if (!maps) return false;
    std::set<Triangle> present;
    for (const auto& t : tris) present.insert(sorted(t));
    std::vector<int> bad;
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      if (!present.count(mapped(tris[i], maps->mx)) || !present.count(mapped(tris[i], maps->my))) {
        bad.push_back(i);
      }
    }
    if (bad.empty()) return true;

    // Group bad triangles into edge-connected components.
    std::map<std::pair<int, int>, std::vector<int>> edge_owner;
    for (int i : bad) {
      const auto& t = tris[i];
      for (int k = 0; k < 3; ++k) {
        int a = t[k], b = t[(k + 1) % 3];
        edge_owner[{std::min(a, b), std::max(a, b)}].push_back(i);
      }
    }
    std::map<int, int> comp;
    int ncomp = 0;
    for (int start : bad) {
      if (comp.count(start)) continue;
      std::vector<int> stack{start};
      comp[start] = ncomp;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const auto& t = tris[cur];
        for (int k = 0; k < 3; ++k) {
          int a = t[k], b = t[(k + 1) % 3];
          for (int o : edge_owner[{std::min(a, b), std::max(a, b)}]) {
            if (!comp.count(o)) {
              comp[o] = ncomp;
              stack.push_back(o);
            }
          }
        }
      }
      ++ncomp;
    }

    std::vector<std::vector<int>> members(ncomp);
    for (const auto& [tri, c] : comp) members[c].push_back(tri);

    std::map<std::vector<int>, Vec2> steiner_of;  // sorted vertex set -> Steiner point
    std::vector<char> drop(tris.size(), 0);
    std::vector<Triangle> added;
    for (const auto& group : members) {
      // Outer boundary edges of the group, oriented counterclockwise.
      std::map<std::pair<int, int>, int> count;
      for (int i : group) {
        const auto& t = tris[i];
        for (int k = 0; k < 3; ++k) {
          int a = t[k], b = t[(k + 1) % 3];
          count[{std::min(a, b), std::max(a, b)}]++;
        }
      }
      std::vector<std::pair<int, int>> rim;
      std::set<int> verts;
      for (int i : group) {
        const auto& t = tris[i];
        for (int k = 0; k < 3; ++k) {
          int a = t[k], b = t[(k + 1) % 3];
          verts.insert(a);
          if (count[{std::min(a, b), std::max(a, b)}] == 1) rim.emplace_back(a, b);
        }
      }
      std::vector<int> vkey(verts.begin(), verts.end());

      auto mirror_key = [&](const std::vector<int>& m) {
        std::vector<int> k;
        for (int v : vkey) k.push_back(m[v]);
        std::sort(k.begin(), k.end());
        return k;
      };
      const auto kx = mirror_key(maps->mx);
      const auto ky = mirror_key(maps->my);
      std::vector<int> kxy;
      for (int v : vkey) kxy.push_back(maps->mx[maps->my[v]]);
      std::sort(kxy.begin(), kxy.end());

      Vec2 s;
      if (auto it = steiner_of.find(kx); it != steiner_of.end() && kx != vkey) {
        s = Vec2(-it->second.x(), it->second.y());
      } else if (auto it2 = steiner_of.find(ky); it2 != steiner_of.end() && ky != vkey) {
        s = Vec2(it2->second.x(), -it2->second.y());
      } else if (auto it3 = steiner_of.find(kxy); it3 != steiner_of.end() && kxy != vkey) {
        s = -it3->second;
      } else {
        s = Vec2::Zero();
        for (int v : vkey) s += pts[v];
        s /= static_cast<double>(vkey.size());
        if (kx == vkey) s.x() = 0.0;
        if (ky == vkey) s.y() = 0.0;
      }
      steiner_of[vkey] = s;
      const int sid = static_cast<int>(pts.size());
      pts.push_back(s);
      for (int i : group) drop[i] = 1;
      for (const auto& [a, b] : rim) added.push_back({a, b, sid});
    }
    std::vector<Triangle> next;
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      if (!drop[i]) next.push_back(tris[i]);
    }
    next.insert(next.end(), added.begin(), added.end());
    tris = std::move(next);
  }
  return false;
}

struct Candidate {
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  std::vector<BoundaryPoint> boundary;
};

Candidate build_candidate(const Domain& domain, double h, int attempt) {
  const bool symmetric = domain.mirror_symmetric();
  const double L = domain.perimeter();
  int nb = static_cast<int>(std::lround(L / h));
  if (symmetric) nb = 4 * static_cast<int>(std::lround(L / (4.0 * h)));
  nb = std::max(nb, 16);

  Candidate c;
  c.boundary = boundary_sample(domain, nb);
  for (const auto& bp : c.boundary) c.vertices.push_back(bp.position);

  // Triangular lattice. The retry transposes it for symmetric domains (which
  // preserves both mirror symmetries) and shifts it otherwise.
  const bool transpose = symmetric && attempt == 1;
  Vec2 origin = symmetric ? Vec2::Zero() : domain.centroid();
  if (!symmetric && attempt == 1) origin += Vec2(0.31 * h, 0.17 * h);
  const double row = 0.5 * std::sqrt(3.0) * h;
  const auto& poly = domain.polygon();
  Vec2 lo = poly.front(), hi = poly.front();
  for (const auto& p : poly) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double reach = (hi - lo).maxCoeff() + 2.0 * h;
  const int kmax = static_cast<int>(reach / row) + 2;
  const int jmax = static_cast<int>(reach / h) + 2;
  for (int k = -kmax; k <= kmax; ++k) {
    const double shift = (k % 2 != 0) ? 0.5 : 0.0;
    for (int j = -jmax; j <= jmax; ++j) {
      const double along = (j + shift) * h;
      const double across = k * row;
      const Vec2 p = transpose ? Vec2(across, along) + origin : Vec2(along, across) + origin;
      if (!contains(domain, p)) continue;
      if (polygon_distance(poly, p) <= 0.5 * h) continue;
      c.vertices.push_back(p);
    }
  }

  auto tris = delaunay_triangulate(c.vertices);
  std::vector<Triangle> kept;
  kept.reserve(tris.size());
  for (const auto& t : tris) {
    const Vec2& a = c.vertices[t[0]];
    const Vec2& b = c.vertices[t[1]];
    const Vec2& d = c.vertices[t[2]];
    if (orient2d(a, b, d) <= 1e-14 * h * h) continue;
    const Vec2 centroid = (a + b + d) / 3.0;
    if (!contains(domain, centroid)) continue;
    kept.push_back(t);
  }
  if (symmetric && !symmetrize(c.vertices, kept)) {
    throw MeshQualityFailure(0.0, "could not build a mirror-symmetric triangulation");
  }
  c.triangles = std::move(kept);
  return c;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
           std::vector<BoundaryPoint> boundary, double h)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary)),
      h_(h) {
  const int nv = num_vertices();
  boundary_ids_.resize(boundary_.size());
  for (int i = 0; i < num_boundary(); ++i) boundary_ids_[i] = i;

  areas_.resize(triangles_.size());
  grads_.resize(triangles_.size());
  lumped_.assign(nv, 0.0);
  vertex_tris_.assign(nv, {});
  std::vector<std::set<int>> nbr(nv);
  for (int t = 0; t < num_triangles(); ++t) {
    auto& tri = triangles_[t];
    const Vec2& a = vertices_[tri[0]];
    const Vec2& b = vertices_[tri[1]];
    const Vec2& c = vertices_[tri[2]];
    double twice = orient2d(a, b, c);
    if (twice < 0.0) {
      std::swap(tri[1], tri[2]);
      twice = -twice;
    }
    const std::array<Vec2, 3> p{vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
    areas_[t] = 0.5 * twice;
    for (int i = 0; i < 3; ++i) {
      const Vec2& pj = p[(i + 1) % 3];
      const Vec2& pk = p[(i + 2) % 3];
      // grad phi_i = rot90(p_k - p_j) / (2A)
      grads_[t][i] = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / twice;
      lumped_[tri[i]] += areas_[t] / 3.0;
      vertex_tris_[tri[i]].push_back(t);
      nbr[tri[i]].insert(tri[(i + 1) % 3]);
      nbr[tri[i]].insert(tri[(i + 2) % 3]);
    }
  }
  neighbors_.resize(nv);
  for (int v = 0; v < nv; ++v) neighbors_[v].assign(nbr[v].begin(), nbr[v].end());
  build_locator();
}

double Mesh::arclength(int v) const {
  if (v < 0 || v >= num_vertices()) throw UnknownVertex(v);
  if (!is_boundary(v)) throw InvalidArgument("vertex " + std::to_string(v) + " is interior");
  return boundary_[v].arclength;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (double x : areas_) a += x;
  return a;
}

double Mesh::min_angle_degrees() const {
  double m = 180.0;
  for (const auto& t : triangles_) {
    m = std::min(m, triangle_min_angle(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]));
  }
  return m;
}

const std::vector<int>& Mesh::vertex_neighbors(int v) const {
  if (v < 0 || v >= num_vertices()) throw UnknownVertex(v);
  return neighbors_[v];
}

long Mesh::num_edges() const {
  long twice = 0;
  for (const auto& n : neighbors_) twice += static_cast<long>(n.size());
  return twice / 2;
}

void Mesh::build_locator() {
  Vec2 lo = vertices_.front(), hi = vertices_.front();
  for (const auto& p : vertices_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  cell_ = std::max(h_, 1e-12);
  grid_lo_ = lo - Vec2(cell_, cell_);
  nx_ = static_cast<int>((hi.x() - grid_lo_.x()) / cell_) + 2;
  ny_ = static_cast<int>((hi.y() - grid_lo_.y()) / cell_) + 2;
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    Vec2 tlo = vertices_[tri[0]], thi = vertices_[tri[0]];
    for (int i = 1; i < 3; ++i) {
      tlo = tlo.cwiseMin(vertices_[tri[i]]);
      thi = thi.cwiseMax(vertices_[tri[i]]);
    }
    const int i0 = static_cast<int>((tlo.x() - grid_lo_.x()) / cell_);
    const int i1 = static_cast<int>((thi.x() - grid_lo_.x()) / cell_);
    const int j0 = static_cast<int>((tlo.y() - grid_lo_.y()) / cell_);
    const int j1 = static_cast<int>((thi.y() - grid_lo_.y()) / cell_);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(t);
    }
  }
}

std::optional<MeshLocation> Mesh::locate(const Vec2& p) const {
  const int i = static_cast<int>(std::floor((p.x() - grid_lo_.x()) / cell_));
  const int j = static_cast<int>(std::floor((p.y() - grid_lo_.y()) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return std::nullopt;
  const double tol = 1e-12;
  std::optional<MeshLocation> best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (int t : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    const auto& tri = triangles_[t];
    const Vec2& a = vertices_[tri[0]];
    const Vec2& b = vertices_[tri[1]];
    const Vec2& c = vertices_[tri[2]];
    const double twice = 2.0 * areas_[t];
    const std::array<double, 3> w{orient2d(p, b, c) / twice, orient2d(a, p, c) / twice,
                                  orient2d(a, b, p) / twice};
    const double m = std::min({w[0], w[1], w[2]});
    if (m >= -tol && m > best_min) {
      best_min = m;
      best = MeshLocation{t, w};
    }
  }
  return best;
}

std::optional<double> Mesh::interpolate(std::span<const double> values, const Vec2& p) const {
  const auto loc = locate(p);
  if (!loc) return std::nullopt;
  const auto& tri = triangles_[loc->triangle];
  return loc->weights[0] * values[tri[0]] + loc->weights[1] * values[tri[1]] +
         loc->weights[2] * values[tri[2]];
}

MeshCheck check_mesh(const Mesh& mesh, const Domain& domain) {
  MeshCheck r;
  const auto& V = mesh.vertices();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    if (!(orient2d(V[tri[0]], V[tri[1]], V[tri[2]]) > 0.0)) {
      r.positively_oriented = false;
      r.detail += "triangle " + std::to_string(t) + " not positively oriented; ";
    }
  }
  std::map<std::pair<int, int>, int> edges;
  for (const auto& tri : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  const int nb = mesh.num_boundary();
  for (const auto& [e, n] : edges) {
    const bool boundary_edge =
        mesh.is_boundary(e.first) && mesh.is_boundary(e.second) &&
        ((e.second - e.first) == 1 || (e.first == 0 && e.second == nb - 1));
    const int expected = boundary_edge ? 1 : 2;
    if (n != expected) {
      r.conforming = false;
      r.detail += "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                  ") shared by " + std::to_string(n) + "; ";
      break;
    }
  }
  const double tol = 1e-10 * domain.diameter();
  for (int b = 0; b < nb; ++b) {
    const auto& bp = mesh.boundary_point(b);
    if ((domain.position(bp.t) - V[b]).norm() > tol) {
      r.boundary_on_curve = false;
      r.detail += "boundary vertex " + std::to_string(b) + " off the curve; ";
      break;
    }
  }
  for (int v = nb; v < mesh.num_vertices(); ++v) {
    if (!contains(domain, V[v])) {
      r.interior_inside = false;
      r.detail += "interior vertex " + std::to_string(v) + " outside; ";
      break;
    }
  }
  r.min_angle_degrees = mesh.min_angle_degrees();
  return r;
}

Mesh triangulate(const Domain& domain, double h) {
  if (!(h > 0.0)) throw InvalidArgument("mesh size h must be positive");
  const double d = inradius(domain);
  if (!(h < d)) {
    throw InvalidArgument("mesh size h = " + std::to_string(h) + " must be below the inradius " +
                          std::to_string(d));
  }
  std::string why;
  double worst = 0.0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Candidate c;
    try {
      c = build_candidate(domain, h, attempt);
    } catch (const MeshQualityFailure& e) {
      why = e.what();
      continue;
    }
    Mesh mesh(std::move(c.vertices), std::move(c.triangles), std::move(c.boundary), h);
    const auto check = check_mesh(mesh, domain);
    if (check.ok(kMinAngleDegrees)) return mesh;
    worst = check.min_angle_degrees;
    why = check.detail.empty() ? "minimum angle below threshold" : check.detail;
  }
  throw MeshQualityFailure(worst, why);
}

}  // namespace mcflow
