#include "mcflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

// Boost 1.74 pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "mcflow/errors.hpp"
#include "nelder_mead.hpp"

namespace mcflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kArclengthKnots = 4096;
constexpr int kPolygonPoints = 2048;
constexpr int kConvexityProbes = 10000;
constexpr double kMinCurvature = 1e-9;

struct RadialProfile {
  double r, dr, ddr;
};

RadialProfile fourier_profile(const FourierCurve& c, double t) {
  RadialProfile p{c.r0, 0.0, 0.0};
  for (const auto& h : c.harmonics) {
    const double k = h.k;
    const double ck = std::cos(k * t), sk = std::sin(k * t);
    p.r += h.cos_amp * ck + h.sin_amp * sk;
    p.dr += k * (-h.cos_amp * sk + h.sin_amp * ck);
    p.ddr += -k * k * (h.cos_amp * ck + h.sin_amp * sk);
  }
  return p;
}

template <class F>
double integrate(F&& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 6, 1e-10);
}

double wrap_parameter(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

}  // namespace

struct Domain::ArclengthTable {
  std::vector<double> knot_s;  // s at t_k = k * dt, k = 0..kArclengthKnots
  boost::math::interpolators::pchip<std::vector<double>> inverse;
};

Domain Domain::ellipse(double a, double b) { return Domain(Ellipse{a, b}); }

Domain Domain::fourier(double r0, std::vector<Harmonic> harmonics) {
  return Domain(FourierCurve{r0, std::move(harmonics)});
}

Domain::Domain(Kind kind) : kind_(std::move(kind)) {
  if (const auto* e = std::get_if<Ellipse>(&kind_)) {
    if (!(e->a > 0.0) || !(e->b > 0.0)) throw InvalidDomain("ellipse semi-axes must be positive");
  } else {
    const auto& f = std::get<FourierCurve>(kind_);
    if (!(f.r0 > 0.0)) throw InvalidDomain("fourier base radius must be positive");
    for (const auto& h : f.harmonics) {
      if (h.k < 1) throw InvalidDomain("fourier harmonic index must be >= 1");
    }
  }

  for (int i = 0; i < kConvexityProbes; ++i) {
    const double t = kTwoPi * i / kConvexityProbes;
    if (const auto* f = std::get_if<FourierCurve>(&kind_)) {
      if (fourier_profile(*f, t).r <= 0.0) {
        throw InvalidDomain("fourier radius is not positive at t = " + std::to_string(t));
      }
    }
    const double k = curvature(t);
    if (!(k > kMinCurvature)) throw NonConvex(t, k);
  }

  // Arclength table on a uniform parameter grid.
  const double dt = kTwoPi / kArclengthKnots;
  std::vector<double> s(kArclengthKnots + 1, 0.0);
  std::vector<double> t(kArclengthKnots + 1, 0.0);
  for (int k = 1; k <= kArclengthKnots; ++k) {
    t[k] = k * dt;
    s[k] = s[k - 1] + segment_length((k - 1) * dt, k * dt);
  }
  t.back() = kTwoPi;
  perimeter_ = s.back();
  std::vector<double> knot_s = s;
  auto table = std::make_shared<ArclengthTable>(ArclengthTable{
      std::move(knot_s),
      boost::math::interpolators::pchip<std::vector<double>>(std::move(s), std::move(t))});
  table_ = std::move(table);

  area_ = 0.5 * integrate(
                    [this](double u) {
                      const Vec2 p = position(u), v = velocity(u);
                      return p.x() * v.y() - p.y() * v.x();
                    },
                    0.0, kTwoPi);
  const double mx = integrate(
      [this](double u) {
        const Vec2 p = position(u);
        return 0.5 * p.x() * p.x() * velocity(u).y();
      },
      0.0, kTwoPi);
  const double my = integrate(
      [this](double u) {
        const Vec2 p = position(u);
        return -0.5 * p.y() * p.y() * velocity(u).x();
      },
      0.0, kTwoPi);
  centroid_ = Vec2(mx / area_, my / area_);

  polygon_.reserve(kPolygonPoints);
  polygon_t_.reserve(kPolygonPoints);
  for (const auto& bp : boundary_sample(*this, kPolygonPoints)) {
    polygon_.push_back(bp.position);
    polygon_t_.push_back(bp.t);
  }

  double diam = 0.0;
  for (std::size_t i = 0; i < polygon_.size(); ++i) {
    for (std::size_t j = i + 1; j < polygon_.size(); ++j) {
      diam = std::max(diam, (polygon_[i] - polygon_[j]).squaredNorm());
    }
  }
  diameter_ = std::sqrt(diam);
}

Vec2 Domain::position(double t) const {
  if (const auto* e = std::get_if<Ellipse>(&kind_)) {
    return {e->a * std::cos(t), e->b * std::sin(t)};
  }
  const auto p = fourier_profile(std::get<FourierCurve>(kind_), t);
  return {p.r * std::cos(t), p.r * std::sin(t)};
}

Vec2 Domain::velocity(double t) const {
  if (const auto* e = std::get_if<Ellipse>(&kind_)) {
    return {-e->a * std::sin(t), e->b * std::cos(t)};
  }
  const auto p = fourier_profile(std::get<FourierCurve>(kind_), t);
  const double c = std::cos(t), s = std::sin(t);
  return {p.dr * c - p.r * s, p.dr * s + p.r * c};
}

Vec2 Domain::acceleration(double t) const {
  if (const auto* e = std::get_if<Ellipse>(&kind_)) {
    return {-e->a * std::cos(t), -e->b * std::sin(t)};
  }
  const auto p = fourier_profile(std::get<FourierCurve>(kind_), t);
  const double c = std::cos(t), s = std::sin(t);
  return {p.ddr * c - 2.0 * p.dr * s - p.r * c, p.ddr * s + 2.0 * p.dr * c - p.r * s};
}

double Domain::curvature(double t) const {
  const Vec2 v = velocity(t);
  const double speed = v.norm();
  if (speed < 1e-12) throw DegenerateTangent(t);
  const Vec2 a = acceleration(t);
  return (v.x() * a.y() - v.y() * a.x()) / (speed * speed * speed);
}

Vec2 Domain::outward_normal(double t) const {
  const Vec2 v = velocity(t);
  const double speed = v.norm();
  if (speed < 1e-12) throw DegenerateTangent(t);
  // Counterclockwise traversal: the outward normal is the tangent rotated by -90 degrees.
  return Vec2(v.y(), -v.x()) / speed;
}

BoundaryPoint Domain::point_at(double t) const {
  BoundaryPoint bp;
  bp.t = t;
  bp.arclength = arclength(t);
  bp.position = position(t);
  bp.outward_normal = outward_normal(t);
  bp.curvature = curvature(t);
  return bp;
}

double Domain::segment_length(double t0, double t1) const {
  return integrate([this](double u) { return velocity(u).norm(); }, t0, t1);
}

double Domain::arclength(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= kTwoPi) return perimeter_;
  const double dt = kTwoPi / kArclengthKnots;
  const int k = std::min(static_cast<int>(t / dt), kArclengthKnots - 1);
  return table_->knot_s[k] + segment_length(k * dt, t);
}

double Domain::parameter_at_arclength(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= perimeter_) return kTwoPi;
  double t = table_->inverse(s);
  for (int it = 0; it < 3; ++it) {
    const double err = arclength(t) - s;
    t -= err / velocity(t).norm();
    if (std::abs(err) < 1e-15 * perimeter_) break;
  }
  return std::clamp(t, 0.0, kTwoPi);
}

bool Domain::mirror_symmetric() const {
  if (std::holds_alternative<Ellipse>(kind_)) return true;
  for (const auto& h : std::get<FourierCurve>(kind_).harmonics) {
    if (h.sin_amp != 0.0) return false;
    if (h.cos_amp != 0.0 && h.k % 2 != 0) return false;
  }
  return true;
}

Domain Domain::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw InvalidDomain("scale factor must be positive");
  if (const auto* e = std::get_if<Ellipse>(&kind_)) {
    return Domain::ellipse(lambda * e->a, lambda * e->b);
  }
  FourierCurve f = std::get<FourierCurve>(kind_);
  f.r0 *= lambda;
  for (auto& h : f.harmonics) {
    h.cos_amp *= lambda;
    h.sin_amp *= lambda;
  }
  return Domain(std::move(f));
}

double curvature(const Domain& domain, double t) { return domain.curvature(t); }

double kappa_max(const Domain& domain, int n_samples) {
  if (n_samples < 64) throw InvalidDomain("kappa_max needs at least 64 samples");
  const double dt = kTwoPi / n_samples;
  int best = 0;
  double best_kappa = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double t = i * dt;
    const double k = domain.curvature(t);
    if (!(k > 0.0)) throw NonConvex(t, k);
    if (k > best_kappa) {
      best_kappa = k;
      best = i;
    }
  }
  const double lo = (best - 1) * dt;
  const double hi = (best + 1) * dt;
  const auto [t_star, neg_kappa] = boost::math::tools::brent_find_minima(
      [&domain](double t) { return -domain.curvature(wrap_parameter(t)); }, lo, hi,
      std::numeric_limits<double>::digits / 2);
  (void)t_star;
  return std::max(best_kappa, -neg_kappa);
}

double distance_to_boundary(const Domain& domain, const Vec2& p) {
  const auto& poly = domain.polygon();
  const int n = static_cast<int>(poly.size());
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double d2 = (poly[i] - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  const auto& ts = domain.polygon_parameters();
  double t_lo = ts[(best + n - 1) % n];
  double t_hi = ts[(best + 1) % n];
  const double t_mid = ts[best];
  if (t_lo > t_mid) t_lo -= kTwoPi;
  if (t_hi < t_mid) t_hi += kTwoPi;
  const auto [t_star, d2] = boost::math::tools::brent_find_minima(
      [&](double t) { return (domain.position(t) - p).squaredNorm(); }, t_lo, t_hi,
      std::numeric_limits<double>::digits / 2);
  (void)t_star;
  return std::sqrt(std::min(d2, best_d2));
}

double inradius(const Domain& domain) {
  const double scale = domain.diameter();
  auto objective = [&](const Vec2& p) {
    if (!contains(domain, p)) return 0.0;
    return -distance_to_boundary(domain, p);
  };
  detail::NelderMeadOptions opts;
  opts.initial_step = 0.1 * scale;
  opts.x_tolerance = 1e-9 * scale;
  opts.max_evaluations = 4000;
  // Restart once from the first optimum to shake off a collapsed simplex on the ridge.
  Vec2 best = detail::nelder_mead(objective, domain.centroid(), opts).x;
  opts.initial_step = 0.01 * scale;
  best = detail::nelder_mead(objective, best, opts).x;
  return distance_to_boundary(domain, best);
}

std::vector<BoundaryPoint> boundary_sample(const Domain& domain, int n) {
  if (n < 4) throw InvalidDomain("boundary_sample needs at least 4 points");
  const double L = domain.perimeter();
  std::vector<BoundaryPoint> pts(n);

  if (domain.mirror_symmetric() && n % 4 == 0) {
    // Build the first quadrant and reflect, so mirrored samples are bitwise mirrored.
    const int q = n / 4;
    for (int i = 0; i <= q; ++i) {
      pts[i] = domain.point_at(domain.parameter_at_arclength(i * L / n));
    }
    pts[0].t = 0.0;
    pts[0].position.y() = 0.0;
    pts[q].t = 0.5 * std::numbers::pi;
    pts[q].position.x() = 0.0;
    pts[q].outward_normal = Vec2(0.0, 1.0);
    pts[0].outward_normal = Vec2(1.0, 0.0);
    for (int i = q + 1; i <= 2 * q; ++i) {
      BoundaryPoint m = pts[2 * q - i];
      m.t = std::numbers::pi - m.t;
      m.arclength = 0.5 * L - m.arclength;
      m.position.x() = -m.position.x();
      m.outward_normal.x() = -m.outward_normal.x();
      pts[i] = m;
    }
    for (int i = 2 * q + 1; i < n; ++i) {
      BoundaryPoint m = pts[n - i];
      m.t = kTwoPi - m.t;
      m.arclength = L - m.arclength;
      m.position.y() = -m.position.y();
      m.outward_normal.y() = -m.outward_normal.y();
      pts[i] = m;
    }
    return pts;
  }

  for (int i = 0; i < n; ++i) {
    pts[i] = domain.point_at(domain.parameter_at_arclength(i * L / n));
  }
  return pts;
}

bool contains(const Domain& domain, const Vec2& p) {
  const auto& poly = domain.polygon();
  const std::size_t n = poly.size();
  const double eps = 1e-14 * domain.diameter();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const Vec2 e = b - a;
    const double cross = e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x());
    const double len = e.norm();
    if (std::abs(cross) <= eps * len) {
      const double proj = e.dot(p - a);
      if (proj >= -eps * len && proj <= len * len + eps * len) return false;  // on an edge
    }
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && cross > 0.0) ++winding;
    } else {
      if (b.y() <= p.y() && cross < 0.0) --winding;
    }
  }
  return winding != 0;
}

}  // namespace mcflow
