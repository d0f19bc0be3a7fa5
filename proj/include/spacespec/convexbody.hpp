#pragma once

#include <cstdint>
#include <vector>

#include "spacespec/spaceform.hpp"

namespace spacespec {

// Strictly convex polygon in a straight-geodesic chart, vertices listed
// counter-clockwise, with an interior base point.
class ConvexBody {
public:
  ConvexBody(Curvature delta, ChartKind chart, std::vector<Vec2> vertices, Vec2 base,
             double hemisphere_margin = 1e-3);

  Curvature delta() const { return delta_; }
  ChartKind chart() const { return chart_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  ModelPoint vertex(std::size_t i) const { return ModelPoint{chart_, vertices_[i % vertices_.size()]}; }
  ModelPoint base() const { return ModelPoint{chart_, base_}; }

  ConvexBody with_base(const Vec2& base) const;
  ConvexBody transformed(const Isometry& iso) const;
  bool contains(const ModelPoint& p) const;
  // Geodesic distance from an interior point to the boundary, negative outside.
  double boundary_distance(const ModelPoint& p) const;
  // Stable fingerprint of the vertex data, for report context.
  std::uint64_t hash() const;

private:
  Curvature delta_;
  ChartKind chart_;
  std::vector<Vec2> vertices_;
  Vec2 base_;
  // Unit normals of the edge lines in the embedding, inward positive.
  std::vector<Vec3> normals_;
};

struct SupportFunction {
  Curvature delta = Curvature::flat;
  ModelPoint base;
  std::vector<double> rho;  // rho[j] along theta_j = 2 pi j / m

  std::size_t size() const { return rho.size(); }
  double angle(std::size_t j) const;
  double min() const;
  double max() const;
};

SupportFunction support_of(const ConvexBody& body, int m);

// sup-norm of ln(rho_a / rho_b) on a shared grid.
double body_metric(const SupportFunction& a, const SupportFunction& b);

double lipschitz_bound(Curvature delta, double r, double R);
// Largest |rho_{j+1} - rho_j| / dtheta around the circle.
double discrete_lipschitz(const SupportFunction& sf);
// Slack added to the continuum bound when comparing grid quotients.
double lipschitz_grid_allowance(double bound, int m);

struct HausdorffResult {
  double value = 0.0;
  double grid_error = 0.0;  // longest chord between consecutive boundary samples
};
HausdorffResult hausdorff_distance(const ConvexBody& a, const ConvexBody& b, int m = 256);

struct InradiusResult {
  double radius = 0.0;
  ModelPoint center;
};
InradiusResult inradius(const ConvexBody& body);

// Largest and smallest geodesic distance from the base to the boundary.
double outer_radius(const ConvexBody& body);
double inner_radius(const ConvexBody& body);

double polygon_area(const ConvexBody& body);

// Vertices moved by the dilation about the base. Off the plane, corners that
// would turn reflex are dropped.
ConvexBody dilate_body(const ConvexBody& body, double lambda);

// Regular m-gon inscribed in the geodesic circle of radius r about center.
ConvexBody geodesic_ball(const ModelPoint& center, double r, int m = 128);
ConvexBody geodesic_ball(Curvature delta, double r, int m = 128);

struct RandomBodyParams {
  int nv = 8;
  double r_min = 0.5;
  double r_max = 1.5;
};
ConvexBody random_body(Curvature delta, std::uint64_t seed, const RandomBodyParams& params);

enum class PerturbationMode { ellipse, one_bump };
ConvexBody perturbed_ball(Curvature delta, double r, double eps, PerturbationMode mode, int m = 128);

}  // namespace spacespec
