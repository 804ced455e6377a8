#include "mcflow/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#ifdef MCFLOW_DELAUNAY_DEBUG
#include <cstdio>
#include <cstdlib>
#endif

#include "mcflow/errors.hpp"

namespace mcflow {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
         clift * (adx * bdy - ady * bdx);
}

namespace {

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nbr;  // nbr[i] lies across the edge opposite v[i]
  bool alive = true;
};

class BowyerWatson {
 public:
  explicit BowyerWatson(std::span<const Vec2> input) {
    pts_.assign(input.begin(), input.end());
    Vec2 lo = pts_.front(), hi = pts_.front();
    for (const auto& p : pts_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 mid = 0.5 * (lo + hi);
    const double span = std::max((hi - lo).maxCoeff(), 1e-12);
    n_real_ = static_cast<int>(pts_.size());
    const double big = 64.0 * span;
    pts_.emplace_back(mid.x() - 2.0 * big, mid.y() - big);
    pts_.emplace_back(mid.x() + 2.0 * big, mid.y() - big);
    pts_.emplace_back(mid.x(), mid.y() + 2.0 * big);
    tris_.push_back(Tri{{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
  }

  void insert_all() {
    // Insert along a serpentine sweep of grid cells so the walk stays short.
    const int n = n_real_;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Vec2 lo = pts_.front(), hi = pts_.front();
    for (int i = 0; i < n; ++i) {
      lo = lo.cwiseMin(pts_[i]);
      hi = hi.cwiseMax(pts_[i]);
    }
    const int cells = std::max(1, static_cast<int>(std::sqrt(n / 4.0)));
    const Vec2 ext = (hi - lo).cwiseMax(Vec2(1e-12, 1e-12));
    auto key = [&](int i) {
      const Vec2 q = (pts_[i] - lo).cwiseQuotient(ext);
      const int row = std::min(cells - 1, static_cast<int>(q.y() * cells));
      const double x = (row % 2 == 0) ? q.x() : 1.0 - q.x();
      return std::pair<int, double>(row, x);
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
    for (int i : order) {
      insert(i);
#ifdef MCFLOW_DELAUNAY_DEBUG
      validate(i);
#endif
    }
  }

#ifdef MCFLOW_DELAUNAY_DEBUG
  void validate(int inserted) const {
    double total = 0.0;
    for (const auto& tri : tris_) {
      if (tri.alive) total += orient2d(pts_[tri.v[0]], pts_[tri.v[1]], pts_[tri.v[2]]);
    }
    const double super = orient2d(pts_[n_real_], pts_[n_real_ + 1], pts_[n_real_ + 2]);
    if (std::abs(total - super) > 1e-9 * super) {
      std::fprintf(stderr, "after %d: area %.17g vs %.17g\n", inserted, total, super);
      std::abort();
    }
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      const Tri& tri = tris_[t];
      if (!tri.alive) continue;
      if (orient2d(pts_[tri.v[0]], pts_[tri.v[1]], pts_[tri.v[2]]) <= 0.0) {
        std::fprintf(stderr, "after %d: tri %d not ccw\n", inserted, t);
        std::abort();
      }
      for (int i = 0; i < 3; ++i) {
        const int nb = tri.nbr[i];
        if (nb < 0) continue;
        if (!tris_[nb].alive) {
          std::fprintf(stderr, "after %d: tri %d points to dead %d\n", inserted, t, nb);
          std::abort();
        }
        bool back = false;
        const int ea = tri.v[(i + 1) % 3], eb = tri.v[(i + 2) % 3];
        for (int j = 0; j < 3; ++j) {
          if (tris_[nb].nbr[j] == t && tris_[nb].v[(j + 1) % 3] == eb &&
              tris_[nb].v[(j + 2) % 3] == ea) {
            back = true;
          }
        }
        if (!back) {
          std::fprintf(stderr, "after %d: tri %d -> %d not symmetric\n", inserted, t, nb);
          std::abort();
        }
      }
    }
  }
#endif

  std::vector<Triangle> result() const {
    std::vector<Triangle> out;
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= n_real_ || t.v[1] >= n_real_ || t.v[2] >= n_real_) continue;
      out.push_back({t.v[0], t.v[1], t.v[2]});
    }
    return out;
  }

 private:
  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  int n_real_ = 0;
  int last_ = 0;
  std::vector<int> mark_;  // per-triangle stamp for cavity membership
  int stamp_ = 0;

  // Orientation with values within rounding of zero snapped to zero.
  double side(int a, int b, const Vec2& p) const {
    const Vec2& pa = pts_[a];
    const Vec2& pb = pts_[b];
    const double o = orient2d(pa, pb, p);
    const double scale = (pb - pa).norm() * (p - pa).norm();
    return std::abs(o) <= 1e-13 * scale ? 0.0 : o;
  }

  bool in_circle(const Tri& t, const Vec2& p) const {
    return incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p) > 0.0;
  }

  int locate(const Vec2& p) {
    int t = last_;
    if (!tris_[t].alive) {
      t = 0;
      while (!tris_[t].alive) ++t;
    }
    const int max_steps = 4 * static_cast<int>(tris_.size()) + 16;
    unsigned rot = 0;
    for (int step = 0; step < max_steps; ++step) {
      const Tri& tri = tris_[t];
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int i = static_cast<int>((k + rot) % 3);
        const int a = tri.v[(i + 1) % 3], b = tri.v[(i + 2) % 3];
        if (side(a, b, p) < 0.0 && tri.nbr[i] >= 0) {
          t = tri.nbr[i];
          moved = true;
          break;
        }
      }
      ++rot;
      if (!moved) return t;
    }
    // Fallback: exhaustive search for a triangle containing p.
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      const Tri& tri = tris_[i];
      if (!tri.alive) continue;
      if (side(tri.v[0], tri.v[1], p) >= 0.0 && side(tri.v[1], tri.v[2], p) >= 0.0 &&
          side(tri.v[2], tri.v[0], p) >= 0.0) {
        return i;
      }
    }
#ifdef MCFLOW_DELAUNAY_DEBUG
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      const Tri& tri = tris_[i];
      if (!tri.alive) continue;
      const double o0 = orient2d(pts_[tri.v[0]], pts_[tri.v[1]], p);
      const double o1 = orient2d(pts_[tri.v[1]], pts_[tri.v[2]], p);
      const double o2 = orient2d(pts_[tri.v[2]], pts_[tri.v[0]], p);
      if (std::min({o0, o1, o2}) > -1e-3)
        std::fprintf(stderr, "near tri %d (%d %d %d): %g %g %g\n", i, tri.v[0], tri.v[1], tri.v[2], o0, o1, o2);
    }
    std::fprintf(stderr, "p = %.17g %.17g\n", p.x(), p.y());
#endif
    throw Error("delaunay: point location failed");
  }

  int new_tri(const Tri& t) {
    if (!free_.empty()) {
      const int id = free_.back();
      free_.pop_back();
      tris_[id] = t;
      return id;
    }
    tris_.push_back(t);
    return static_cast<int>(tris_.size()) - 1;
  }

  void insert(int pi) {
    const Vec2& p = pts_[pi];
    const int seed = locate(p);

    if (mark_.size() < tris_.size()) mark_.resize(tris_.size() * 2, 0);
    ++stamp_;
    std::vector<int> cavity{seed};
    mark_[seed] = stamp_;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri& t = tris_[cavity[k]];
      for (int nb : t.nbr) {
        if (nb < 0 || mark_[nb] == stamp_) continue;
        if (in_circle(tris_[nb], p)) {
          mark_[nb] = stamp_;
          cavity.push_back(nb);
        }
      }
    }

    // Near-cocircular decisions can make the cavity non-star-shaped; shrink it
    // until every boundary edge sees p strictly on its interior side.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < cavity.size(); ++k) {
        const int ti = cavity[k];
        const Tri& t = tris_[ti];
        for (int i = 0; i < 3; ++i) {
          const int nb = t.nbr[i];
          if (nb >= 0 && mark_[nb] == stamp_) continue;
          const int a = t.v[(i + 1) % 3], b = t.v[(i + 2) % 3];
          if (side(a, b, p) > 0.0) continue;
          if (ti == seed) {
            // p sits on an edge of the seed: the neighbour must join the cavity.
            if (nb >= 0) {
              mark_[nb] = stamp_;
              cavity.push_back(nb);
              changed = true;
            }
            continue;
          }
          mark_[ti] = 0;
          cavity.erase(cavity.begin() + static_cast<long>(k));
          changed = true;
          break;
        }
        if (changed) break;
      }
      if (changed) {
        // Keep only the part still connected to the seed.
        std::vector<int> keep{seed};
        ++stamp_;
        const int old = stamp_ - 1;
        mark_[seed] = stamp_;
        for (std::size_t k = 0; k < keep.size(); ++k) {
          for (int nb : tris_[keep[k]].nbr) {
            if (nb >= 0 && mark_[nb] == old) {
              mark_[nb] = stamp_;
              keep.push_back(nb);
            }
          }
        }
        for (int c : cavity) {
          if (mark_[c] == old) mark_[c] = 0;
        }
        cavity = std::move(keep);
      }
    }

    struct Edge {
      int a, b, outside;
    };
    std::vector<Edge> rim;
    for (int ti : cavity) {
      const Tri& t = tris_[ti];
      for (int i = 0; i < 3; ++i) {
        const int nb = t.nbr[i];
        if (nb >= 0 && mark_[nb] == stamp_) continue;
        rim.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], nb});
      }
    }
    for (int ti : cavity) {
      tris_[ti].alive = false;
      free_.push_back(ti);
    }

    std::unordered_map<int, int> by_start, by_end;
    std::vector<int> created;
    created.reserve(rim.size());
    for (const auto& e : rim) {
      // (a, b, p) is counterclockwise since p is left of a->b.
      const int id = new_tri(Tri{{e.a, e.b, pi}, {-1, e.outside, -1}, true});
      // nbr[2] lies opposite p, i.e. across edge (a, b).
      tris_[id].nbr = {-1, -1, e.outside};
      if (e.outside >= 0) {
        Tri& o = tris_[e.outside];
        for (int j = 0; j < 3; ++j) {
          const int oa = o.v[(j + 1) % 3], ob = o.v[(j + 2) % 3];
          if (oa == e.b && ob == e.a) o.nbr[j] = id;
        }
      }
      by_start[e.a] = id;
      by_end[e.b] = id;
      created.push_back(id);
    }
    for (int id : created) {
      Tri& t = tris_[id];
      // Opposite v[0]=a is edge (b, p): shared with the triangle starting at b.
      t.nbr[0] = by_start.at(t.v[1]);
      // Opposite v[1]=b is edge (p, a): shared with the triangle ending at a.
      t.nbr[1] = by_end.at(t.v[0]);
    }
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size() * 2, 0);
    last_ = created.front();
  }
};

}  // namespace

std::vector<Triangle> delaunay_triangulate(std::span<const Vec2> points) {
  if (points.size() < 3) return {};
  BowyerWatson bw(points);
  bw.insert_all();
  return bw.result();
}

}  // namespace mcflow
