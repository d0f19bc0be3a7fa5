#include "spacespec/convexbody.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include <Eigen/Dense>

#include "spacespec/errors.hpp"
#include "spacespec/rng.hpp"

namespace spacespec {

namespace {

constexpr double pi = std::numbers::pi;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double distance_from_sd(Curvature delta, double sd) {
  switch (delta) {
    case Curvature::hyperbolic: return std::asinh(sd);
    case Curvature::spherical: return std::asin(std::clamp(sd, -1.0, 1.0));
    case Curvature::flat: return sd;
  }
  return sd;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Drops vertices whose exterior angle is tiny; such corners make meshing
// and convexity checks needlessly fragile.
std::vector<Vec2> prune_flat_corners(std::vector<Vec2> poly, double min_turn) {
  bool changed = true;
  while (changed && poly.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2& a = poly[(i + poly.size() - 1) % poly.size()];
      const Vec2& b = poly[i];
      const Vec2& c = poly[(i + 1) % poly.size()];
      const Vec2 e1 = b - a, e2 = c - b;
      if (std::atan2(cross2(e1, e2), e1.dot(e2)) < min_turn) {
        poly.erase(poly.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return poly;
}

}  // namespace

ConvexBody::ConvexBody(Curvature delta, ChartKind chart, std::vector<Vec2> vertices, Vec2 base,
                       double hemisphere_margin)
    : delta_(delta), chart_(chart), vertices_(std::move(vertices)), base_(base) {
  if (curvature_of(chart_) != delta_) throw ChartError("chart does not belong to the body's geometry");
  if (!is_straight(chart_)) throw ChartError("bodies must be given in a straight-geodesic chart");
  const std::size_t m = vertices_.size();
  if (m < 3) throw GeometryError("a body needs at least three vertices");
  for (const Vec2& v : vertices_) ModelPoint::make(chart_, v);
  ModelPoint::make(chart_, base_);

  Vec2 centroid = Vec2::Zero();
  for (const Vec2& v : vertices_) centroid += v;
  centroid /= static_cast<double>(m);
  double scale = 0.0;
  for (const Vec2& v : vertices_) scale = std::max(scale, (v - centroid).norm());
  const double tol = 1e-12 * scale * scale;

  double turning = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e1 = vertices_[(i + 1) % m] - vertices_[i];
    const Vec2 e2 = vertices_[(i + 2) % m] - vertices_[(i + 1) % m];
    const double c = cross2(e1, e2);
    if (!(c > tol)) throw GeometryError("polygon is not strictly convex and counter-clockwise");
    turning += std::atan2(c, e1.dot(e2));
  }
  if (std::abs(turning - 2.0 * pi) > 1e-6) throw GeometryError("polygon winds more than once");
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e = vertices_[(i + 1) % m] - vertices_[i];
    if (!(cross2(e, base_ - vertices_[i]) > tol)) throw GeometryError("base point is not strictly interior");
  }
  if (delta_ == Curvature::spherical) {
    for (std::size_t i = 0; i < m; ++i)
      if (geodesic_distance(this->base(), vertex(i)) >= pi / 2 - hemisphere_margin)
        throw GeometryError("spherical body reaches too close to the boundary of a hemisphere");
  }

  normals_.reserve(m);
  Eigen::Matrix3d e = Eigen::Matrix3d::Identity();
  e(2, 2) = delta_ == Curvature::flat ? 0.0 : to_int(delta_);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 n = embed(vertex(i)).cross(embed(vertex(i + 1)));
    normals_.push_back(n / std::sqrt(n.dot(e * n)));
  }
}

ConvexBody ConvexBody::with_base(const Vec2& base) const {
  return ConvexBody(delta_, chart_, vertices_, base);
}

ConvexBody ConvexBody::transformed(const Isometry& iso) const {
  std::vector<Vec2> v;
  v.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) v.push_back(iso.apply(vertex(i)).coords);
  return ConvexBody(delta_, chart_, std::move(v), iso.apply(base()).coords);
}

double ConvexBody::boundary_distance(const ModelPoint& p) const {
  const ModelPoint q = chart_convert(p, chart_);
  const Vec3 x = embed(q);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& n : normals_) best = std::min(best, x.dot(n));
  return distance_from_sd(delta_, best);
}

bool ConvexBody::contains(const ModelPoint& p) const { return boundary_distance(p) > 0.0; }

std::uint64_t ConvexBody::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](double d) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &d, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  feed(to_int(delta_));
  for (const Vec2& v : vertices_) {
    feed(v.x());
    feed(v.y());
  }
  feed(base_.x());
  feed(base_.y());
  return h;
}

double SupportFunction::angle(std::size_t j) const {
  return 2.0 * pi * static_cast<double>(j) / static_cast<double>(rho.size());
}

double SupportFunction::min() const { return *std::min_element(rho.begin(), rho.end()); }
double SupportFunction::max() const { return *std::max_element(rho.begin(), rho.end()); }

SupportFunction support_of(const ConvexBody& body, int m) {
  if (m < 16) throw DomainError("support grid needs at least 16 directions");
  SupportFunction sf;
  sf.delta = body.delta();
  sf.base = body.base();
  sf.rho.resize(static_cast<std::size_t>(m));
  const auto& v = body.vertices();
  const Vec2 b = body.base().coords;
  const auto frame = orthonormal_frame(body.base());
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * pi * j / m;
    // In a straight chart the geodesic ray is the coordinate ray.
    const Vec2 d = std::cos(theta) * frame[0] + std::sin(theta) * frame[1];
    double t_exit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 e = v[(i + 1) % v.size()] - v[i];
      const Vec2 outward(e.y(), -e.x());
      const double den = outward.dot(d);
      if (den > 0.0) t_exit = std::min(t_exit, outward.dot(v[i] - b) / den);
    }
    if (!std::isfinite(t_exit) || !(t_exit > 0.0)) throw GeometryError("base point is not interior");
    sf.rho[static_cast<std::size_t>(j)] =
        geodesic_distance(body.base(), ModelPoint{body.chart(), b + t_exit * d});
  }
  return sf;
}

double body_metric(const SupportFunction& a, const SupportFunction& b) {
  if (a.delta != b.delta) throw DomainError("support functions of different geometries");
  if (a.size() != b.size()) throw DomainError("support functions sampled on different grids");
  if (a.base.chart != b.base.chart || (a.base.coords - b.base.coords).norm() > 1e-12)
    throw DomainError("support functions taken about different base points");
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(std::log(a.rho[j] / b.rho[j])));
  return d;
}

double lipschitz_bound(Curvature delta, double r, double R) {
  if (!(r > 0.0 && r <= R)) throw DomainError("need 0 < r <= R");
  if (delta == Curvature::spherical) return 1.0 / std::tan(r);
  const double sR = s_delta(delta, R);
  const double q = sR / s_delta(delta, r);
  return sR * std::sqrt(std::max(0.0, q * q - 1.0));
}

double discrete_lipschitz(const SupportFunction& sf) {
  const std::size_t m = sf.size();
  const double dtheta = 2.0 * pi / static_cast<double>(m);
  double best = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    best = std::max(best, std::abs(sf.rho[(j + 1) % m] - sf.rho[j]) / dtheta);
  return best;
}

double lipschitz_grid_allowance(double bound, int m) {
  // Grid quotients are averages of the derivative, so in exact arithmetic
  // they never exceed the bound; the O(dtheta) term absorbs rounding in rho.
  return (2.0 * pi / m) * bound + 1e-9;
}

namespace {

struct BoundarySamples {
  std::vector<ModelPoint> points;
  double max_gap = 0.0;
};

BoundarySamples sample_boundary(const ConvexBody& body, double spacing) {
  BoundarySamples out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const ModelPoint a = body.vertex(i);
    const ModelPoint b = body.vertex(i + 1);
    const double len = geodesic_distance(a, b);
    const int k = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    ModelPoint prev = a;
    for (int s = 0; s < k; ++s) {
      const ModelPoint p{body.chart(), a.coords + (static_cast<double>(s) / k) * (b.coords - a.coords)};
      if (s > 0) out.max_gap = std::max(out.max_gap, geodesic_distance(prev, p));
      out.points.push_back(p);
      prev = p;
    }
    out.max_gap = std::max(out.max_gap, geodesic_distance(prev, b));
  }
  return out;
}

double one_sided(const BoundarySamples& from, const ConvexBody& to) {
  double worst = 0.0;
  for (const ModelPoint& x : from.points) {
    if (to.contains(x)) continue;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < to.size(); ++j)
      best = std::min(best, distance_to_segment(x, to.vertex(j), to.vertex(j + 1)));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

HausdorffResult hausdorff_distance(const ConvexBody& a, const ConvexBody& b, int m) {
  if (a.delta() != b.delta()) throw DomainError("Hausdorff distance across geometries");
  if (a.chart() != b.chart()) throw ChartError("bodies given in different charts");
  const double spacing = 2.0 * pi * std::max(outer_radius(a), outer_radius(b)) / m;
  const BoundarySamples sa = sample_boundary(a, spacing);
  const BoundarySamples sb = sample_boundary(b, spacing);
  HausdorffResult r;
  r.value = std::max(one_sided(sa, b), one_sided(sb, a));
  r.grid_error = std::max(sa.max_gap, sb.max_gap);
  return r;
}

InradiusResult inradius(const ConvexBody& body) {
  const auto& v = body.vertices();
  Vec2 lo = v[0], hi = v[0];
  for (const Vec2& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  auto f = [&](const Vec2& c) {
    if (!in_chart_region(body.chart(), c)) return -std::numeric_limits<double>::infinity();
    return body.boundary_distance(ModelPoint{body.chart(), c});
  };
  const int grid = 48;
  Vec2 best = body.base().coords;
  double fbest = f(best);
  for (int i = 1; i < grid; ++i)
    for (int j = 1; j < grid; ++j) {
      const Vec2 c(lo.x() + (hi.x() - lo.x()) * i / grid, lo.y() + (hi.y() - lo.y()) * j / grid);
      const double fc = f(c);
      if (fc > fbest) {
        fbest = fc;
        best = c;
      }
    }
  // Compass search; the objective is a minimum of smooth functions, so
  // many directions are used to follow ridges between active edges.
  const int dirs = 64;
  double step = (hi - lo).maxCoeff() / grid;
  const double stop = 1e-14 * std::max(1.0, (hi - lo).maxCoeff());
  while (step > stop) {
    bool improved = false;
    for (int k = 0; k < dirs; ++k) {
      const double a = 2.0 * pi * k / dirs;
      const Vec2 c = best + step * Vec2(std::cos(a), std::sin(a));
      const double fc = f(c);
      if (fc > fbest) {
        fbest = fc;
        best = c;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return InradiusResult{fbest, ModelPoint{body.chart(), best}};
}

double outer_radius(const ConvexBody& body) {
  double r = 0.0;
  for (std::size_t i = 0; i < body.size(); ++i) r = std::max(r, geodesic_distance(body.base(), body.vertex(i)));
  return r;
}

double inner_radius(const ConvexBody& body) { return body.boundary_distance(body.base()); }

double polygon_area(const ConvexBody& body) {
  const std::size_t m = body.size();
  if (body.delta() == Curvature::flat) {
    double a = 0.0;
    for (std::size_t i = 0; i < m; ++i) a += cross2(body.vertices()[i], body.vertices()[(i + 1) % m]);
    return 0.5 * a;
  }
  // Gauss-Bonnet: area = delta (sum of interior angles - (m - 2) pi).
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const ModelPoint p = body.vertex(i);
    const Vec2 a = log_map(p, body.vertex(i + m - 1)).components;
    const Vec2 b = log_map(p, body.vertex(i + 1)).components;
    const Eigen::Matrix2d g = metric_tensor(p);
    sum += std::atan2(std::sqrt(g.determinant()) * std::abs(cross2(a, b)), a.dot(g * b));
  }
  return to_int(body.delta()) * (sum - (static_cast<double>(m) - 2.0) * pi);
}

ConvexBody dilate_body(const ConvexBody& body, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("dilation factor must lie in (0, 1]");
  if (lambda == 1.0) return body;
  std::vector<Vec2> v;
  v.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) v.push_back(dilation(body.base(), lambda, body.vertex(i)).coords);
  try {
    return ConvexBody(body.delta(), body.chart(), v, body.base().coords);
  } catch (const GeometryError&) {
  }
  // Off the flat plane, a corner with an angle close to pi can turn reflex
  // when its neighbours are pulled in. Dropping such corners in the straight
  // chart, where edges are segments, gives the largest convex polygon on the
  // dilated vertices.
  const ChartKind sc = straight_chart(body.delta());
  std::vector<Vec2> s;
  s.reserve(v.size());
  for (const Vec2& x : v) s.push_back(chart_convert(ModelPoint{body.chart(), x}, sc).coords);
  s = prune_flat_corners(std::move(s), 1e-9);
  std::vector<Vec2> back;
  back.reserve(s.size());
  for (const Vec2& x : s) back.push_back(chart_convert(ModelPoint{sc, x}, body.chart()).coords);
  try {
    return ConvexBody(body.delta(), body.chart(), std::move(back), body.base().coords);
  } catch (const GeometryError& e) {
    throw GeometryError(std::string("dilated polygon is not a valid convex body: ") + e.what());
  }
}

ConvexBody geodesic_ball(const ModelPoint& center, double r, int m) {
  if (!is_straight(center.chart)) throw ChartError("ball center must be given in a straight chart");
  if (m < 3) throw DomainError("ball polygon needs at least three vertices");
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    TangentVec t = unit_direction(center, 2.0 * pi * j / m);
    t.components *= r;
    v.push_back(exp_map(t).coords);
  }
  return ConvexBody(center.curvature(), center.chart, std::move(v), center.coords);
}

ConvexBody geodesic_ball(Curvature delta, double r, int m) {
  return geodesic_ball(ModelPoint{straight_chart(delta), Vec2::Zero()}, r, m);
}

ConvexBody random_body(Curvature delta, std::uint64_t seed, const RandomBodyParams& params) {
  if (!(params.r_min > 0.0 && params.r_min <= params.r_max)) throw DomainError("need 0 < r_min <= r_max");
  if (params.nv < 3) throw DomainError("need at least three boundary points");
  if (delta == Curvature::spherical && params.r_max >= pi / 2 - 1e-3)
    throw DomainError("spherical bodies must stay inside a hemisphere");
  const ModelPoint origin{straight_chart(delta), Vec2::Zero()};
  Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Vec2> pts;
    for (int i = 0; i < params.nv; ++i) {
      TangentVec t = unit_direction(origin, rng.uniform(0.0, 2.0 * pi));
      t.components *= rng.uniform(params.r_min, params.r_max);
      pts.push_back(exp_map(t).coords);
    }
    std::vector<Vec2> hull = prune_flat_corners(convex_hull(pts), 0.02);
    if (hull.size() < 3) continue;
    try {
      ConvexBody body(delta, origin.chart, hull, Vec2::Zero());
      if (inner_radius(body) < 0.2 * params.r_min) continue;
      return body;
    } catch (const GeometryError&) {
      continue;
    }
  }
  throw GeometryError("random body generator kept producing degenerate hulls");
}

ConvexBody perturbed_ball(Curvature delta, double r, double eps, PerturbationMode mode, int m) {
  if (!(eps >= 0.0)) throw DomainError("perturbation size must be nonnegative");
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const ModelPoint origin{straight_chart(delta), Vec2::Zero()};
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * pi * j / m;
    double rho = r;
    if (mode == PerturbationMode::ellipse) {
      const double a = r * (1.0 + eps), b = r / (1.0 + eps);
      const double c = std::cos(theta) / a, s = std::sin(theta) / b;
      rho = 1.0 / std::sqrt(c * c + s * s);
    } else {
      const double w = std::remainder(theta, 2.0 * pi) / 0.6;
      rho = r * (1.0 + eps * std::exp(-w * w));
    }
    TangentVec t = unit_direction(origin, theta);
    t.components *= rho;
    v.push_back(exp_map(t).coords);
  }
  try {
    return ConvexBody(delta, origin.chart, std::move(v), Vec2::Zero());
  } catch (const GeometryError& e) {
    throw GeometryError(std::string("perturbation destroyed convexity: ") + e.what());
  }
}

}  // namespace spacespec
