#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spacespec/convexbody.hpp"

namespace spacespec {

// Triangulation in the conformal chart of its geometry.
struct TriMesh {
  Curvature delta = Curvature::flat;
  ChartKind chart = ChartKind::plane;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> boundary;  // per-vertex Dirichlet mask
  double h = 0.0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t interior_count() const;
  double max_edge() const;
  double triangle_area(std::size_t t) const;
  Vec2 centroid(std::size_t t) const;
  ModelPoint point(std::size_t v) const { return ModelPoint{chart, vertices[v]}; }
};

// Lattice spacing as a fraction of h; edges of the final mesh stay below h.
inline constexpr double lattice_fraction = 0.6;

TriMesh triangulate(const ConvexBody& body, double h);

// Splits every triangle into four; new boundary nodes are placed on the
// exact geodesic edges of body.
TriMesh refine_uniform(const TriMesh& mesh, const ConvexBody& body);

// Sub-mesh of the triangles selected by keep; vertices on the cut become
// Dirichlet nodes. Unused vertices are dropped.
TriMesh restrict_mesh(const TriMesh& mesh, const std::function<bool(std::size_t)>& keep);

// Checks orientation, the area floor and boundary placement; throws MeshError.
void validate_mesh(const TriMesh& mesh, const ConvexBody& body);

std::string mesh_to_json(const TriMesh& mesh);

}  // namespace spacespec
