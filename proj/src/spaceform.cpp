#include "spacespec/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "spacespec/errors.hpp"

namespace spacespec {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::Matrix3d eta(Curvature delta) {
  Eigen::Matrix3d e = Eigen::Matrix3d::Identity();
  e(2, 2) = to_int(delta);
  return e;
}

// Forces a point back onto the hyperboloid or sphere after arithmetic drift.
Vec3 renormalize(Curvature delta, Vec3 x) {
  if (delta == Curvature::flat) {
    x(2) = 1.0;
    return x;
  }
  const double q = ambient_inner(delta, x, x) * to_int(delta);
  return x / std::sqrt(q);
}

void require_same_chart(const ModelPoint& p, const ModelPoint& q) {
  if (p.chart != q.chart) throw ChartError("points are expressed in different charts");
}

}  // namespace

Curvature curvature_from_int(int delta) {
  if (delta < -1 || delta > 1)
    throw DomainError("curvature must be -1, 0 or 1, got " + std::to_string(delta));
  return static_cast<Curvature>(delta);
}

Curvature curvature_of(ChartKind chart) {
  switch (chart) {
    case ChartKind::plane: return Curvature::flat;
    case ChartKind::poincare_disk:
    case ChartKind::klein_disk: return Curvature::hyperbolic;
    case ChartKind::stereographic:
    case ChartKind::gnomonic: return Curvature::spherical;
  }
  throw ChartError("unknown chart");
}

bool is_conformal(ChartKind chart) {
  return chart == ChartKind::plane || chart == ChartKind::poincare_disk ||
         chart == ChartKind::stereographic;
}

bool is_straight(ChartKind chart) {
  return chart == ChartKind::plane || chart == ChartKind::klein_disk || chart == ChartKind::gnomonic;
}

ChartKind conformal_chart(Curvature delta) {
  switch (delta) {
    case Curvature::hyperbolic: return ChartKind::poincare_disk;
    case Curvature::flat: return ChartKind::plane;
    case Curvature::spherical: return ChartKind::stereographic;
  }
  return ChartKind::plane;
}

ChartKind straight_chart(Curvature delta) {
  switch (delta) {
    case Curvature::hyperbolic: return ChartKind::klein_disk;
    case Curvature::flat: return ChartKind::plane;
    case Curvature::spherical: return ChartKind::gnomonic;
  }
  return ChartKind::plane;
}

std::string_view chart_name(ChartKind chart) {
  switch (chart) {
    case ChartKind::plane: return "plane";
    case ChartKind::poincare_disk: return "poincare-disk";
    case ChartKind::klein_disk: return "klein-disk";
    case ChartKind::stereographic: return "stereographic";
    case ChartKind::gnomonic: return "gnomonic";
  }
  return "?";
}

std::optional<ChartKind> chart_from_name(std::string_view name) {
  for (ChartKind c : {ChartKind::plane, ChartKind::poincare_disk, ChartKind::klein_disk,
                      ChartKind::stereographic, ChartKind::gnomonic})
    if (chart_name(c) == name) return c;
  return std::nullopt;
}

bool in_chart_region(ChartKind chart, const Vec2& coords) {
  if (!std::isfinite(coords.x()) || !std::isfinite(coords.y())) return false;
  if (chart == ChartKind::poincare_disk || chart == ChartKind::klein_disk)
    return coords.squaredNorm() < 1.0;
  return true;
}

ModelPoint ModelPoint::make(ChartKind chart, const Vec2& coords) {
  if (!in_chart_region(chart, coords))
    throw ChartError("coordinates outside the region of chart " + std::string(chart_name(chart)));
  return ModelPoint{chart, coords};
}

double s_delta(Curvature delta, double t) {
  switch (delta) {
    case Curvature::hyperbolic: return std::sinh(t);
    case Curvature::flat: return t;
    case Curvature::spherical: return std::sin(t);
  }
  return t;
}

double c_delta(Curvature delta, double t) {
  switch (delta) {
    case Curvature::hyperbolic: return std::cosh(t);
    case Curvature::flat: return 1.0;
    case Curvature::spherical: return std::cos(t);
  }
  return 1.0;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(Curvature delta, int n, double r) {
  if (n < 2) throw DomainError("dimension must be at least 2");
  if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
  if (delta == Curvature::spherical && r >= pi) throw DomainError("spherical radius must be below pi");
  if (n == 2) {
    switch (delta) {
      case Curvature::flat: return pi * r * r;
      case Curvature::hyperbolic: {
        const double s = std::sinh(0.5 * r);
        return 4.0 * pi * s * s;
      }
      case Curvature::spherical: {
        const double s = std::sin(0.5 * r);
        return 4.0 * pi * s * s;
      }
    }
  }
  if (delta == Curvature::flat) return unit_sphere_area(n) * std::pow(r, n) / n;
  auto integrand = [&](double t) { return std::pow(s_delta(delta, t), n - 1); };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, r, 15, 1e-14);
  return unit_sphere_area(n) * integral;
}

double ball_radius_for_volume(Curvature delta, int n, double volume) {
  if (!(volume > 0.0)) throw DomainError("volume must be positive");
  if (n == 2) {
    switch (delta) {
      case Curvature::flat: return std::sqrt(volume / pi);
      case Curvature::hyperbolic: return 2.0 * std::asinh(std::sqrt(volume / (4.0 * pi)));
      case Curvature::spherical:
        if (volume >= 4.0 * pi) throw DomainError("volume exceeds the area of the sphere");
        return 2.0 * std::asin(std::sqrt(volume / (4.0 * pi)));
    }
  }
  if (delta == Curvature::flat) return std::pow(volume * n / unit_sphere_area(n), 1.0 / n);
  double hi = 1.0;
  if (delta == Curvature::spherical) {
    if (volume >= unit_sphere_area(n + 1)) throw DomainError("volume exceeds the volume of the sphere");
    hi = pi * (1.0 - 1e-15);
  } else {
    while (ball_volume(delta, n, hi) < volume) hi *= 2.0;
  }
  auto f = [&](double r) { return ball_volume(delta, n, r) - volume; };
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, hi, -volume, f(hi), tol, iters);
  return 0.5 * (a + b);
}

Vec3 embed(const ModelPoint& p) {
  const Vec2& x = p.coords;
  const double s = x.squaredNorm();
  switch (p.chart) {
    case ChartKind::plane: return Vec3(x.x(), x.y(), 1.0);
    case ChartKind::poincare_disk: {
      const double d = 1.0 - s;
      return Vec3(2.0 * x.x() / d, 2.0 * x.y() / d, (1.0 + s) / d);
    }
    case ChartKind::klein_disk: {
      const double w = 1.0 / std::sqrt(1.0 - s);
      return Vec3(x.x() * w, x.y() * w, w);
    }
    case ChartKind::stereographic: {
      const double d = 1.0 + s;
      return Vec3(2.0 * x.x() / d, 2.0 * x.y() / d, (1.0 - s) / d);
    }
    case ChartKind::gnomonic: {
      const double z = 1.0 / std::sqrt(1.0 + s);
      return Vec3(x.x() * z, x.y() * z, z);
    }
  }
  throw ChartError("unknown chart");
}

ModelPoint from_embedded(ChartKind chart, const Vec3& x) {
  Vec2 c;
  switch (chart) {
    case ChartKind::plane: c = Vec2(x(0), x(1)); break;
    case ChartKind::poincare_disk: c = Vec2(x(0), x(1)) / (1.0 + x(2)); break;
    case ChartKind::klein_disk: c = Vec2(x(0), x(1)) / x(2); break;
    case ChartKind::stereographic:
      if (!(1.0 + x(2) > 1e-300)) throw ChartError("point at the pole excluded from the stereographic chart");
      c = Vec2(x(0), x(1)) / (1.0 + x(2));
      break;
    case ChartKind::gnomonic:
      if (!(x(2) > 0.0)) throw ChartError("point outside the hemisphere covered by the gnomonic chart");
      c = Vec2(x(0), x(1)) / x(2);
      break;
  }
  return ModelPoint::make(chart, c);
}

double ambient_inner(Curvature delta, const Vec3& a, const Vec3& b) {
  return a(0) * b(0) + a(1) * b(1) + to_int(delta) * a(2) * b(2);
}

Eigen::Matrix<double, 3, 2> chart_jacobian(const ModelPoint& p) {
  const Vec2& x = p.coords;
  const double s = x.squaredNorm();
  Eigen::Matrix<double, 3, 2> j;
  switch (p.chart) {
    case ChartKind::plane:
      j << 1, 0, 0, 1, 0, 0;
      break;
    case ChartKind::poincare_disk: {
      const double d = 1.0 - s;
      for (int k = 0; k < 2; ++k) {
        j(0, k) = 4.0 * x(0) * x(k) / (d * d) + (k == 0 ? 2.0 / d : 0.0);
        j(1, k) = 4.0 * x(1) * x(k) / (d * d) + (k == 1 ? 2.0 / d : 0.0);
        j(2, k) = 4.0 * x(k) / (d * d);
      }
      break;
    }
    case ChartKind::klein_disk: {
      const double w = 1.0 / std::sqrt(1.0 - s);
      const double w3 = w * w * w;
      for (int k = 0; k < 2; ++k) {
        j(0, k) = x(0) * x(k) * w3 + (k == 0 ? w : 0.0);
        j(1, k) = x(1) * x(k) * w3 + (k == 1 ? w : 0.0);
        j(2, k) = x(k) * w3;
      }
      break;
    }
    case ChartKind::stereographic: {
      const double d = 1.0 + s;
      for (int k = 0; k < 2; ++k) {
        j(0, k) = -4.0 * x(0) * x(k) / (d * d) + (k == 0 ? 2.0 / d : 0.0);
        j(1, k) = -4.0 * x(1) * x(k) / (d * d) + (k == 1 ? 2.0 / d : 0.0);
        j(2, k) = -4.0 * x(k) / (d * d);
      }
      break;
    }
    case ChartKind::gnomonic: {
      const double z = 1.0 / std::sqrt(1.0 + s);
      const double z3 = z * z * z;
      for (int k = 0; k < 2; ++k) {
        j(0, k) = -x(0) * x(k) * z3 + (k == 0 ? z : 0.0);
        j(1, k) = -x(1) * x(k) * z3 + (k == 1 ? z : 0.0);
        j(2, k) = -x(k) * z3;
      }
      break;
    }
  }
  return j;
}

Eigen::Matrix2d metric_tensor(const ModelPoint& p) {
  const auto j = chart_jacobian(p);
  Eigen::Matrix3d e = eta(p.curvature());
  if (p.chart == ChartKind::plane) e(2, 2) = 0.0;
  return j.transpose() * e * j;
}

Vec3 push_forward(const TangentVec& v) { return chart_jacobian(v.base) * v.components; }

TangentVec pull_back(const ModelPoint& base, const Vec3& ambient) {
  const auto j = chart_jacobian(base);
  Eigen::Matrix3d e = eta(base.curvature());
  if (base.chart == ChartKind::plane) e(2, 2) = 0.0;
  const Eigen::Matrix2d g = j.transpose() * e * j;
  const Vec2 rhs = j.transpose() * e * ambient;
  return TangentVec{base, g.ldlt().solve(rhs)};
}

double tangent_inner(const TangentVec& a, const TangentVec& b) {
  require_same_chart(a.base, b.base);
  return a.components.dot(metric_tensor(a.base) * b.components);
}

double tangent_norm(const TangentVec& v) {
  return std::sqrt(std::max(0.0, tangent_inner(v, v)));
}

double geodesic_distance(const ModelPoint& p, const ModelPoint& q) {
  require_same_chart(p, q);
  const Curvature delta = p.curvature();
  if (delta == Curvature::flat) return (p.coords - q.coords).norm();
  const Vec3 x = embed(p);
  const Vec3 y = embed(q);
  if (delta == Curvature::hyperbolic) {
    const Vec3 d = x - y;
    const double chord2 = std::max(0.0, ambient_inner(delta, d, d));
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  return std::atan2(x.cross(y).norm(), x.dot(y));
}

ModelPoint exp_map(const TangentVec& v) {
  const ModelPoint& base = v.base;
  const Curvature delta = base.curvature();
  if (!std::isfinite(v.components.x()) || !std::isfinite(v.components.y()))
    throw DomainError("tangent vector has non-finite components");
  if (delta == Curvature::flat) return ModelPoint::make(base.chart, base.coords + v.components);
  const double len = tangent_norm(v);
  if (len == 0.0) return base;
  if (delta == Curvature::spherical && len >= pi) throw DomainError("tangent length must be below pi on the sphere");
  const Vec3 x = embed(base);
  const Vec3 w = push_forward(v);
  const Vec3 y = c_delta(delta, len) * x + (s_delta(delta, len) / len) * w;
  return from_embedded(base.chart, renormalize(delta, y));
}

TangentVec log_map(const ModelPoint& x, const ModelPoint& y) {
  require_same_chart(x, y);
  const Curvature delta = x.curvature();
  if (delta == Curvature::flat) return TangentVec{x, y.coords - x.coords};
  const double d = geodesic_distance(x, y);
  if (d == 0.0) return TangentVec{x, Vec2::Zero()};
  if (delta == Curvature::spherical && d > pi - 1e-9) throw DomainError("log map undefined at the antipode");
  const Vec3 ex = embed(x);
  const Vec3 ey = embed(y);
  const double sh = s_delta(delta, 0.5 * d);
  // y - c(d) x with c(d) - 1 = -2 delta s(d/2)^2 to avoid cancellation.
  const Vec3 w = (ey - ex) + 2.0 * to_int(delta) * sh * sh * ex;
  return pull_back(x, (d / s_delta(delta, d)) * w);
}

double conformal_factor(const ModelPoint& p) {
  const double s = p.coords.squaredNorm();
  switch (p.chart) {
    case ChartKind::plane: return 1.0;
    case ChartKind::poincare_disk: {
      const double f = 2.0 / (1.0 - s);
      return f * f;
    }
    case ChartKind::stereographic: {
      const double f = 2.0 / (1.0 + s);
      return f * f;
    }
    default: throw ChartError("conformal factor requested in a non-conformal chart");
  }
}

ModelPoint chart_convert(const ModelPoint& p, ChartKind target) {
  if (curvature_of(target) != p.curvature()) throw DomainError("chart conversion across different curvatures");
  if (target == p.chart) return p;
  return from_embedded(target, embed(p));
}

ModelPoint dilation(const ModelPoint& x0, double lambda, const ModelPoint& p) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("dilation factor must lie in (0, 1]");
  if (lambda == 1.0) return p;
  TangentVec v = log_map(x0, p);
  v.components *= lambda;
  return exp_map(v);
}

std::array<Vec2, 2> orthonormal_frame(const ModelPoint& p) {
  const Eigen::Matrix2d g = metric_tensor(p);
  Vec2 e1(1.0, 0.0);
  e1 /= std::sqrt(e1.dot(g * e1));
  Vec2 e2(0.0, 1.0);
  e2 -= e1.dot(g * e2) * e1;
  e2 /= std::sqrt(e2.dot(g * e2));
  return {e1, e2};
}

TangentVec unit_direction(const ModelPoint& x0, double theta) {
  const auto f = orthonormal_frame(x0);
  return TangentVec{x0, std::cos(theta) * f[0] + std::sin(theta) * f[1]};
}

double signed_distance_to_line(const ModelPoint& x, const ModelPoint& a, const ModelPoint& b) {
  require_same_chart(x, a);
  require_same_chart(a, b);
  const Curvature delta = x.curvature();
  const Vec3 ea = embed(a);
  const Vec3 eb = embed(b);
  const Vec3 n = ea.cross(eb);
  Eigen::Matrix3d e = eta(delta);
  if (delta == Curvature::flat) e(2, 2) = 0.0;
  const double nn = n.dot(e * n);
  if (!(nn > 0.0)) throw GeometryError("degenerate geodesic line");
  const double sd = embed(x).dot(n) / std::sqrt(nn);
  switch (delta) {
    case Curvature::flat: return sd;
    case Curvature::hyperbolic: return std::asinh(sd);
    case Curvature::spherical: return std::asin(std::clamp(sd, -1.0, 1.0));
  }
  return sd;
}

double distance_to_segment(const ModelPoint& x, const ModelPoint& a, const ModelPoint& b) {
  require_same_chart(x, a);
  require_same_chart(a, b);
  const Curvature delta = x.curvature();
  if (delta == Curvature::flat) {
    const Vec2 ab = b.coords - a.coords;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (x.coords - a.coords).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (x.coords - (a.coords + t * ab)).norm();
  }
  const Vec3 ea = embed(a);
  const Vec3 eb = embed(b);
  const Vec3 ex = embed(x);
  const Eigen::Matrix3d e = eta(delta);
  const Vec3 n = e * ea.cross(eb);
  const double nn = ambient_inner(delta, n, n);
  if (!(nn > 0.0)) return geodesic_distance(x, a);
  const Vec3 nh = n / std::sqrt(nn);
  const double sd = ambient_inner(delta, ex, nh);
  const Vec3 foot = ex - sd * nh;
  Eigen::Matrix2d gram;
  gram << ambient_inner(delta, ea, ea), ambient_inner(delta, ea, eb), ambient_inner(delta, ea, eb),
      ambient_inner(delta, eb, eb);
  const Vec2 rhs(ambient_inner(delta, foot, ea), ambient_inner(delta, foot, eb));
  const Vec2 coef = gram.fullPivLu().solve(rhs);
  if (coef(0) >= 0.0 && coef(1) >= 0.0) {
    return delta == Curvature::hyperbolic ? std::abs(std::asinh(sd))
                                          : std::abs(std::asin(std::clamp(sd, -1.0, 1.0)));
  }
  return std::min(geodesic_distance(x, a), geodesic_distance(x, b));
}

Isometry Isometry::identity(Curvature delta) { return Isometry(delta, Mat3::Identity()); }

Isometry Isometry::rotation(Curvature delta, double angle) {
  Mat3 m = Mat3::Identity();
  const double c = std::cos(angle), s = std::sin(angle);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  return Isometry(delta, m);
}

Isometry Isometry::translation(const ModelPoint& target) {
  const Curvature delta = target.curvature();
  Mat3 m = Mat3::Identity();
  if (delta == Curvature::flat) {
    m(0, 2) = target.coords.x();
    m(1, 2) = target.coords.y();
    return Isometry(delta, m);
  }
  const Vec3 t = embed(target);
  const double s = std::hypot(t(0), t(1));
  if (s == 0.0) return Isometry(delta, m);
  const double c = t(2);
  const Vec2 u(t(0) / s, t(1) / s);
  m(0, 0) = 1.0 + (c - 1.0) * u.x() * u.x();
  m(0, 1) = (c - 1.0) * u.x() * u.y();
  m(1, 0) = m(0, 1);
  m(1, 1) = 1.0 + (c - 1.0) * u.y() * u.y();
  m(0, 2) = s * u.x();
  m(1, 2) = s * u.y();
  m(2, 0) = -to_int(delta) * s * u.x();
  m(2, 1) = -to_int(delta) * s * u.y();
  m(2, 2) = c;
  return Isometry(delta, m);
}

ModelPoint Isometry::apply(const ModelPoint& p) const {
  if (p.curvature() != delta_) throw DomainError("isometry applied to a point of another geometry");
  return from_embedded(p.chart, renormalize(delta_, m_ * embed(p)));
}

Isometry Isometry::then(const Isometry& next) const {
  if (next.delta_ != delta_) throw DomainError("composing isometries of different geometries");
  return Isometry(delta_, next.m_ * m_);
}

Isometry Isometry::inverse() const { return Isometry(delta_, m_.inverse()); }

}  // namespace spacespec
