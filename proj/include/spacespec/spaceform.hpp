#pragma once

#include <array>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace spacespec {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class Curvature : int { hyperbolic = -1, flat = 0, spherical = 1 };

// Throws DomainError for anything outside {-1, 0, 1}.
Curvature curvature_from_int(int delta);
constexpr int to_int(Curvature c) { return static_cast<int>(c); }

enum class ChartKind { plane, poincare_disk, klein_disk, stereographic, gnomonic };

Curvature curvature_of(ChartKind chart);
bool is_conformal(ChartKind chart);
bool is_straight(ChartKind chart);
ChartKind conformal_chart(Curvature delta);
ChartKind straight_chart(Curvature delta);
std::string_view chart_name(ChartKind chart);
std::optional<ChartKind> chart_from_name(std::string_view name);

bool in_chart_region(ChartKind chart, const Vec2& coords);

struct ModelPoint {
  ChartKind chart = ChartKind::plane;
  Vec2 coords = Vec2::Zero();

  // Validating constructor.
  static ModelPoint make(ChartKind chart, const Vec2& coords);
  Curvature curvature() const { return curvature_of(chart); }
};

struct TangentVec {
  ModelPoint base;
  Vec2 components = Vec2::Zero();
};

double s_delta(Curvature delta, double t);
double c_delta(Curvature delta, double t);

// Area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);
double ball_volume(Curvature delta, int n, double r);
double ball_radius_for_volume(Curvature delta, int n, double volume);

// Points are realised in R^3: the hyperboloid <X,X> = -1 with the time
// coordinate last, the unit sphere, or (x, y, 1) for the plane.
Vec3 embed(const ModelPoint& p);
ModelPoint from_embedded(ChartKind chart, const Vec3& x);
// <X,Y> = x1 y1 + x2 y2 + delta x3 y3; for delta = 0 only the first two.
double ambient_inner(Curvature delta, const Vec3& a, const Vec3& b);

// Columns are the images of the chart axes under the differential.
Eigen::Matrix<double, 3, 2> chart_jacobian(const ModelPoint& p);
Eigen::Matrix2d metric_tensor(const ModelPoint& p);
Vec3 push_forward(const TangentVec& v);
TangentVec pull_back(const ModelPoint& base, const Vec3& ambient);

double tangent_inner(const TangentVec& a, const TangentVec& b);
double tangent_norm(const TangentVec& v);

double geodesic_distance(const ModelPoint& p, const ModelPoint& q);
ModelPoint exp_map(const TangentVec& v);
TangentVec log_map(const ModelPoint& x, const ModelPoint& y);

// Scalar phi with ds^2 = phi |dx|^2; conformal charts only.
double conformal_factor(const ModelPoint& p);
ModelPoint chart_convert(const ModelPoint& p, ChartKind target);

// H_lambda about x0: exp_x0(t v) -> exp_x0(lambda t v).
ModelPoint dilation(const ModelPoint& x0, double lambda, const ModelPoint& p);

// Orthonormal frame at p obtained from the chart axes by Gram-Schmidt.
std::array<Vec2, 2> orthonormal_frame(const ModelPoint& p);
// Unit tangent at angle theta measured from the first frame vector.
TangentVec unit_direction(const ModelPoint& x0, double theta);

// Signed distance from x to the geodesic through a and b, positive on the
// left of a -> b.
double signed_distance_to_line(const ModelPoint& x, const ModelPoint& a, const ModelPoint& b);
// Distance from x to the geodesic segment [a, b].
double distance_to_segment(const ModelPoint& x, const ModelPoint& a, const ModelPoint& b);

// Rigid motion acting linearly on the embedding of Vec3.
class Isometry {
public:
  static Isometry identity(Curvature delta);
  static Isometry rotation(Curvature delta, double angle);
  // Moves the chart origin to target along the connecting geodesic.
  static Isometry translation(const ModelPoint& target);

  ModelPoint apply(const ModelPoint& p) const;
  Isometry then(const Isometry& next) const;
  Isometry inverse() const;
  Curvature curvature() const { return delta_; }
  const Mat3& matrix() const { return m_; }

private:
  Isometry(Curvature delta, const Mat3& m) : delta_(delta), m_(m) {}
  Curvature delta_;
  Mat3 m_;
};

}  // namespace spacespec
